#include "starcyl/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace starcyl::oracle {

int Instance::value_index(const std::string& v) const {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == v) return static_cast<int>(i);
  throw semantic_error("value '" + v + "' outside the oracle universe");
}

std::size_t TupleSet::pow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

std::size_t TupleSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

std::size_t TupleSet::encode(const std::vector<int>& digits) const {
  std::size_t code = 0;
  for (int d : digits) code = code * base_ + static_cast<std::size_t>(d);
  return code;
}

std::vector<int> TupleSet::decode(std::size_t code) const {
  std::vector<int> digits(width_);
  for (int i = width_ - 1; i >= 0; --i) {
    digits[i] = static_cast<int>(code % base_);
    code /= base_;
  }
  return digits;
}

TupleSet& TupleSet::operator|=(const TupleSet& o) {
  for (std::size_t i = 0; i < mask_.size(); ++i) mask_[i] |= o.mask_[i];
  return *this;
}

TupleSet& TupleSet::operator&=(const TupleSet& o) {
  for (std::size_t i = 0; i < mask_.size(); ++i) mask_[i] &= o.mask_[i];
  return *this;
}

TupleSet TupleSet::complement() const {
  TupleSet r(width_, base_);
  for (std::size_t i = 0; i < mask_.size(); ++i) r.mask_[i] = !mask_[i];
  return r;
}

bool TupleSet::subset_of(const TupleSet& o) const {
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i] && !o.mask_[i]) return false;
  return true;
}

TupleSet TupleSet::outer_cyl(int col) const {
  TupleSet r(width_, base_);
  const std::size_t stride = pow(base_, width_ - col);
  for (std::size_t code = 0; code < mask_.size(); ++code) {
    if (!mask_[code]) continue;
    std::size_t digit = (code / stride) % base_;
    std::size_t zeroed = code - digit * stride;
    for (int a = 0; a < base_; ++a) r.mask_[zeroed + a * stride] = 1;
  }
  return r;
}

TupleSet TupleSet::inner_cyl(int col) const {
  TupleSet r(width_, base_);
  const std::size_t stride = pow(base_, width_ - col);
  for (std::size_t code = 0; code < mask_.size(); ++code) {
    std::size_t digit = (code / stride) % base_;
    if (digit != 0) continue;
    bool all = true;
    for (int a = 0; a < base_ && all; ++a) all = mask_[code + a * stride];
    if (!all) continue;
    for (int a = 0; a < base_; ++a) r.mask_[code + a * stride] = 1;
  }
  return r;
}

TupleSet TupleSet::swapped(const std::vector<std::pair<int, int>>& pairs) const {
  TupleSet r(width_, base_);
  for (std::size_t code = 0; code < mask_.size(); ++code) {
    if (!mask_[code]) continue;
    std::vector<int> d = decode(code);
    for (auto [i, j] : pairs) std::swap(d[i - 1], d[j - 1]);
    r.mask_[encode(d)] = 1;
  }
  return r;
}

std::vector<std::vector<std::string>> TupleSet::tuples(
    const std::vector<std::string>& universe) const {
  std::vector<std::vector<std::string>> out;
  for (std::size_t code = 0; code < mask_.size(); ++code) {
    if (!mask_[code]) continue;
    std::vector<int> d = decode(code);
    std::vector<std::string> t;
    t.reserve(d.size());
    for (int x : d) t.push_back(universe[x]);
    out.push_back(std::move(t));
  }
  return out;
}

TupleSet diagonal(int n, int universe_size, int i, int j) {
  TupleSet r(n, universe_size);
  std::vector<int> d(n, 0);
  std::function<void(int)> fill = [&](int col) {
    if (col == n) {
      if (d[i - 1] == d[j - 1]) r.set(r.encode(d));
      return;
    }
    for (int a = 0; a < universe_size; ++a) {
      d[col] = a;
      fill(col + 1);
    }
  };
  fill(0);
  return r;
}

TupleSet h_expand(const std::vector<std::vector<std::string>>& rel,
                  const Instance& inst, int n) {
  const int base = static_cast<int>(inst.universe.size());
  TupleSet r(n, base);
  for (const auto& t : rel) {
    std::vector<int> d(n, 0);
    for (std::size_t c = 0; c < t.size(); ++c) d[c] = inst.value_index(t[c]);
    const int k = static_cast<int>(t.size());
    std::function<void(int)> fill = [&](int col) {
      if (col == n) {
        r.set(r.encode(d));
        return;
      }
      for (int a = 0; a < base; ++a) {
        d[col] = a;
        fill(col + 1);
      }
    };
    fill(k);
  }
  return r;
}

namespace {

// Recursive grounding of one star-tuple: equality classes are assigned
// together, disequality literals prune the choices.
void ground_tuple(const StarTuple& t, const std::vector<std::string>& T,
                  TupleSet& out) {
  const int n = t.dim();
  const int base = static_cast<int>(T.size());
  auto index_of = [&](const std::string& v) {
    for (int i = 0; i < base; ++i)
      if (T[i] == v) return i;
    throw semantic_error("cylinder constant '" + v +
                         "' outside the grounding universe");
  };

  // Representative of each equality class = smallest column.
  std::vector<int> rep(n + 1);
  for (int c = 1; c <= n; ++c) rep[c] = c;
  for (const Literal& l : t.cond())
    if (l.kind == Literal::Kind::Eq) rep[l.j] = std::min(rep[l.j], rep[l.i]);

  // Allowed values per representative column.
  std::vector<std::vector<int>> allowed(n + 1);
  for (int c = 1; c <= n; ++c) {
    if (rep[c] != c) continue;
    const Value& v = t.entry(c);
    if (v.is_enull())
      throw semantic_error("cannot ground an existential null without an "
                           "assignment");
    if (v.is_const()) {
      allowed[c] = {index_of(v.sym())};
      continue;
    }
    std::vector<bool> ok(base, true);
    for (const Literal& l : t.cond())
      if (l.kind == Literal::Kind::NeqConst && l.i == c)
        ok[index_of(l.sym)] = false;
    for (int a = 0; a < base; ++a)
      if (ok[a]) allowed[c].push_back(a);
  }

  std::vector<int> reps;
  for (int c = 1; c <= n; ++c)
    if (rep[c] == c) reps.push_back(c);

  std::vector<int> chosen(n + 1, -1);
  std::function<void(std::size_t)> assign = [&](std::size_t idx) {
    if (idx == reps.size()) {
      std::vector<int> digits(n);
      for (int c = 1; c <= n; ++c) digits[c - 1] = chosen[rep[c]];
      out.set(out.encode(digits));
      return;
    }
    int c = reps[idx];
    for (int a : allowed[c]) {
      bool ok = true;
      // Class-level inequality against already assigned classes.
      for (const Literal& l : t.cond()) {
        if (l.kind != Literal::Kind::NeqCol) continue;
        int ri = rep[l.i], rj = rep[l.j];
        int other = -1;
        if (ri == c && chosen[rj] >= 0) other = chosen[rj];
        if (rj == c && chosen[ri] >= 0) other = chosen[ri];
        if (other == a) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen[c] = a;
      assign(idx + 1);
      chosen[c] = -1;
    }
  };
  assign(0);
}

}  // namespace

TupleSet ground(const StarCylinder& c, const std::vector<std::string>& T) {
  TupleSet out(c.dim(), static_cast<int>(T.size()));
  for (const StarTuple& t : c.tuples()) ground_tuple(t, T, out);
  return out;
}

TupleSet ground_naive(const StarCylinder& c, const std::vector<std::string>& T,
                      const std::map<int, std::string>& null_assignment) {
  TupleSet out(c.dim(), static_cast<int>(T.size()));
  for (const StarTuple& t : c.tuples()) {
    std::vector<Value> entries = t.entries();
    for (Value& v : entries) {
      if (!v.is_enull()) continue;
      auto it = null_assignment.find(v.null_id());
      if (it == null_assignment.end())
        throw semantic_error("missing assignment for existential null ?" +
                             std::to_string(v.null_id()));
      v = Value::constant(it->second);
    }
    auto nt = StarTuple::normalize(std::move(entries), t.cond());
    if (!nt) continue;  // the assignment contradicts an equality
    ground_tuple(*nt, T, out);
  }
  return out;
}

TupleSet eval_fo_mask(const FormulaPtr& f, int n, const Instance& inst) {
  const int base = static_cast<int>(inst.universe.size());
  switch (f->kind) {
    case Formula::Kind::Atom: {
      // Deliberately naive: enumerate every valuation per stored tuple.
      TupleSet r(n, base);
      const auto& rel = inst.relations.at(f->rel);
      std::vector<int> d(n, 0);
      for (const auto& tup : rel) {
        std::function<void(int)> fill = [&](int col) {
          if (col == n) {
            bool match = true;
            for (std::size_t a = 0; a < f->args.size() && match; ++a) {
              const Term& t = f->args[a];
              int want = inst.value_index(tup[a]);
              if (t.is_var)
                match = d[t.var - 1] == want;
              else
                match = inst.value_index(t.sym) == want;
            }
            if (match) r.set(r.encode(d));
            return;
          }
          for (int a = 0; a < base; ++a) {
            d[col] = a;
            fill(col + 1);
          }
        };
        fill(0);
      }
      return r;
    }
    case Formula::Kind::EqAtom: {
      if (f->var_i == f->var_j) {
        TupleSet r(n, base);
        return r.complement();  // tautology
      }
      return diagonal(n, base, std::min(f->var_i, f->var_j),
                      std::max(f->var_i, f->var_j));
    }
    case Formula::Kind::EqConst: {
      TupleSet r(n, base);
      const int want = inst.value_index(f->sym);
      for (std::size_t code = 0; code < r.capacity(); ++code)
        if (r.decode(code)[f->var_i - 1] == want) r.set(code);
      return r;
    }
    case Formula::Kind::And: {
      TupleSet l = eval_fo_mask(f->left, n, inst);
      l &= eval_fo_mask(f->right, n, inst);
      return l;
    }
    case Formula::Kind::Or: {
      TupleSet l = eval_fo_mask(f->left, n, inst);
      l |= eval_fo_mask(f->right, n, inst);
      return l;
    }
    case Formula::Kind::Not:
      return eval_fo_mask(f->left, n, inst).complement();
    case Formula::Kind::Exists:
      return eval_fo_mask(f->left, n, inst).outer_cyl(f->var_i);
    case Formula::Kind::Forall:
      return eval_fo_mask(f->left, n, inst).inner_cyl(f->var_i);
  }
  throw semantic_error("unreachable formula kind");
}

std::set<std::vector<std::string>> eval_fo(const Query& q,
                                           const Instance& inst) {
  TupleSet mask = eval_fo_mask(q.body, q.n, inst);
  std::set<std::vector<std::string>> out;
  for (std::size_t code = 0; code < mask.capacity(); ++code) {
    if (!mask.test(code)) continue;
    std::vector<int> d = mask.decode(code);
    std::vector<std::string> t;
    t.reserve(q.answer_vars.size());
    for (int v : q.answer_vars) t.push_back(inst.universe[d[v - 1]]);
    out.insert(std::move(t));
  }
  return out;
}

TupleSet eval_ca_set(const ScaPtr& e, const Instance& inst, int n) {
  const int base = static_cast<int>(inst.universe.size());
  switch (e->kind) {
    case ScaExpr::Kind::RelAtom:
      return h_expand(inst.relations.at(e->rel), inst, n);
    case ScaExpr::Kind::ConstCell: {
      TupleSet r(n, base);
      const int want = inst.value_index(e->sym);
      for (std::size_t code = 0; code < r.capacity(); ++code)
        if (r.decode(code)[e->i - 1] == want) r.set(code);
      return r;
    }
    case ScaExpr::Kind::Diag:
      return diagonal(n, base, e->i, e->j);
    case ScaExpr::Kind::Union: {
      TupleSet l = eval_ca_set(e->left, inst, n);
      l |= eval_ca_set(e->right, inst, n);
      return l;
    }
    case ScaExpr::Kind::Intersect: {
      TupleSet l = eval_ca_set(e->left, inst, n);
      l &= eval_ca_set(e->right, inst, n);
      return l;
    }
    case ScaExpr::Kind::Complement:
      return eval_ca_set(e->left, inst, n).complement();
    case ScaExpr::Kind::OuterCyl:
      return eval_ca_set(e->left, inst, n).outer_cyl(e->i);
    case ScaExpr::Kind::InnerCyl:
      return eval_ca_set(e->left, inst, n).inner_cyl(e->i);
    case ScaExpr::Kind::Swap:
      return eval_ca_set(e->left, inst, n).swapped(e->pairs);
  }
  throw semantic_error("unreachable expression kind");
}

std::vector<std::string> fresh_values(const std::set<std::string>& avoid,
                                      int count) {
  std::vector<std::string> out;
  int i = 1;
  while (static_cast<int>(out.size()) < count) {
    std::string v = "_f" + std::to_string(i++);
    if (!avoid.count(v)) out.push_back(v);
  }
  return out;
}

DiffResult differential_check(const Schema& schema,
                              const std::vector<StarCylinder>& stored,
                              const Query& q, int extra_fresh,
                              const EvalOptions& opts) {
  QueryRun run = run_query(schema, stored, q, opts);
  const int n = run.compiled.n;

  std::set<std::string> adom;
  for (const StarCylinder& c : stored)
    for (const std::string& s : c.constants()) adom.insert(s);
  std::function<void(const FormulaPtr&)> consts = [&](const FormulaPtr& f) {
    if (f->kind == Formula::Kind::EqConst) adom.insert(f->sym);
    if (f->kind == Formula::Kind::Atom)
      for (const Term& t : f->args)
        if (!t.is_var) adom.insert(t.sym);
    if (f->left) consts(f->left);
    if (f->right) consts(f->right);
  };
  consts(q.body);

  std::vector<std::string> T(adom.begin(), adom.end());
  for (const std::string& f : fresh_values(adom, n + 1 + extra_fresh))
    T.push_back(f);

  Instance inst;
  inst.universe = T;
  for (const StarCylinder& c : stored)
    inst.relations.push_back(ground(c, T).tuples(T));

  std::set<std::vector<std::string>> expected = eval_fo(q, inst);

  TupleSet got_mask = ground(run.answer, T);
  std::set<std::vector<std::string>> got;
  for (auto& t : got_mask.tuples(T)) got.insert(std::move(t));

  DiffResult res;
  if (got != expected) {
    res.ok = false;
    std::ostringstream os;
    os << "answer mismatch: engine " << got.size() << " tuples, oracle "
       << expected.size() << " tuples over |T|=" << T.size();
    res.detail = os.str();
    return res;
  }

  // When the head covers every free variable, the n-dimensional value
  // must equal the horizontal expansion of the oracle answer.
  std::vector<int> fv = free_vars(q.body);
  std::set<int> head(q.answer_vars.begin(), q.answer_vars.end());
  if (head.size() == fv.size() &&
      std::all_of(fv.begin(), fv.end(), [&](int v) { return head.count(v); })) {
    std::vector<std::vector<std::string>> exp_tuples(expected.begin(),
                                                     expected.end());
    TupleSet expanded = h_expand(exp_tuples, inst, n);
    if (!(ground(run.full, T) == expanded)) {
      res.ok = false;
      res.detail = "full-dimension mismatch against h-expanded oracle answer";
    }
  }
  return res;
}

}  // namespace starcyl::oracle
