#include "starcyl/sca.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>

namespace starcyl {

namespace {

std::shared_ptr<ScaExpr> node(ScaExpr::Kind k) {
  auto e = std::make_shared<ScaExpr>();
  e->kind = k;
  return e;
}

}  // namespace

ScaPtr ScaExpr::rel_atom(int rel) {
  auto e = node(Kind::RelAtom);
  e->rel = rel;
  return e;
}
ScaPtr ScaExpr::const_cell(int i, std::string sym) {
  auto e = node(Kind::ConstCell);
  e->i = i;
  e->sym = std::move(sym);
  return e;
}
ScaPtr ScaExpr::diag(int i, int j) {
  if (i > j) std::swap(i, j);
  auto e = node(Kind::Diag);
  e->i = i;
  e->j = j;
  return e;
}
ScaPtr ScaExpr::set_union(ScaPtr l, ScaPtr r) {
  auto e = node(Kind::Union);
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}
ScaPtr ScaExpr::intersect(ScaPtr l, ScaPtr r) {
  auto e = node(Kind::Intersect);
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}
ScaPtr ScaExpr::complement_of(ScaPtr f) {
  auto e = node(Kind::Complement);
  e->left = std::move(f);
  return e;
}
ScaPtr ScaExpr::outer(int i, ScaPtr f) {
  auto e = node(Kind::OuterCyl);
  e->i = i;
  e->left = std::move(f);
  return e;
}
ScaPtr ScaExpr::inner(int i, ScaPtr f) {
  auto e = node(Kind::InnerCyl);
  e->i = i;
  e->left = std::move(f);
  return e;
}
ScaPtr ScaExpr::swapped(std::vector<std::pair<int, int>> pairs, ScaPtr f) {
  auto e = node(Kind::Swap);
  e->pairs = std::move(pairs);
  e->left = std::move(f);
  return e;
}

std::string ScaExpr::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::RelAtom:
      os << "C" << rel;
      break;
    case Kind::ConstCell:
      os << "cell(" << i << "=" << sym << ")";
      break;
    case Kind::Diag:
      os << "d" << i << j;
      break;
    case Kind::Union:
      os << "(" << left->to_string() << " u " << right->to_string() << ")";
      break;
    case Kind::Intersect:
      os << "(" << left->to_string() << " ^ " << right->to_string() << ")";
      break;
    case Kind::Complement:
      os << "neg(" << left->to_string() << ")";
      break;
    case Kind::OuterCyl:
      os << "c" << i << "(" << left->to_string() << ")";
      break;
    case Kind::InnerCyl:
      os << "ic" << i << "(" << left->to_string() << ")";
      break;
    case Kind::Swap:
      os << "z[";
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (p) os << ",";
        os << pairs[p].first << "<->" << pairs[p].second;
      }
      os << "](" << left->to_string() << ")";
      break;
  }
  return os.str();
}

bool sca_equal(const ScaPtr& a, const ScaPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->rel != b->rel || a->i != b->i || a->j != b->j ||
      a->sym != b->sym || a->pairs != b->pairs)
    return false;
  return sca_equal(a->left, b->left) && sca_equal(a->right, b->right);
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace {

// Wraps `e` with column swaps placing the content of column srcs[l] at
// column tgts[l]. Moves are realized as a sequence of transpositions;
// runs of pairwise-disjoint transpositions are merged into one swap
// node, so a plain relocation z^{1,..,k}_{i1,..,ik} stays one node.
ScaPtr place_columns(ScaPtr e, int n, const std::vector<int>& srcs,
                     const std::vector<int>& tgts) {
  std::vector<int> at(n + 1), slot(n + 1);  // column -> slot, slot -> column
  for (int i = 0; i <= n; ++i) at[i] = slot[i] = i;

  std::vector<std::pair<int, int>> seq;
  for (std::size_t l = 0; l < srcs.size(); ++l) {
    int cur = at[srcs[l]];
    int want = tgts[l];
    if (cur == want) continue;
    int other = slot[want];
    std::swap(slot[cur], slot[want]);
    at[srcs[l]] = want;
    at[other] = cur;
    seq.emplace_back(std::min(cur, want), std::max(cur, want));
  }

  std::vector<std::pair<int, int>> group;
  std::set<int> touched;
  auto flush = [&]() {
    if (group.empty()) return;
    e = ScaExpr::swapped(group, std::move(e));
    group.clear();
    touched.clear();
  };
  for (auto [i, j] : seq) {
    if (touched.count(i) || touched.count(j)) flush();
    group.emplace_back(i, j);
    touched.insert(i);
    touched.insert(j);
  }
  flush();
  return e;
}

struct Compiler {
  int n;

  ScaPtr rec(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Atom: {
        std::vector<int> tgts, srcs;
        for (std::size_t l = 0; l < f->args.size(); ++l) {
          assert(f->args[l].is_var);
          srcs.push_back(static_cast<int>(l) + 1);
          tgts.push_back(f->args[l].var);
        }
        return place_columns(ScaExpr::rel_atom(f->rel), n, srcs, tgts);
      }
      case Formula::Kind::EqAtom:
        if (f->var_i == f->var_j) {
          // x_i ~ x_i denotes the full cylinder: open any diagonal on i.
          int other = f->var_i == 1 ? 2 : 1;
          return ScaExpr::outer(
              f->var_i, ScaExpr::diag(std::min(f->var_i, other),
                                      std::max(f->var_i, other)));
        }
        return ScaExpr::diag(f->var_i, f->var_j);
      case Formula::Kind::EqConst:
        return ScaExpr::const_cell(f->var_i, f->sym);
      case Formula::Kind::And:
        return ScaExpr::intersect(rec(f->left), rec(f->right));
      case Formula::Kind::Or:
        return ScaExpr::set_union(rec(f->left), rec(f->right));
      case Formula::Kind::Not:
        return ScaExpr::complement_of(rec(f->left));
      case Formula::Kind::Exists:
        return ScaExpr::outer(f->var_i, rec(f->left));
      case Formula::Kind::Forall:
        return ScaExpr::inner(f->var_i, rec(f->left));
    }
    throw semantic_error("unreachable formula kind");
  }
};

void check_apart(const FormulaPtr& f, std::set<int>& used) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const Term& t : f->args) {
        if (!t.is_var)
          throw semantic_error(
              "query must be normalized before compilation (constant atom "
              "argument)");
        if (!used.insert(t.var).second)
          throw semantic_error(
              "query must be normalized before compilation (variable x" +
              std::to_string(t.var) + " occurs in several atom positions)");
      }
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      check_apart(f->left, used);
      check_apart(f->right, used);
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      check_apart(f->left, used);
      break;
    default:
      break;
  }
}

bool has_self_eq(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::EqAtom && f->var_i == f->var_j) return true;
  if (f->left && has_self_eq(f->left)) return true;
  if (f->right && has_self_eq(f->right)) return true;
  return false;
}

}  // namespace

CompiledQuery compile(const Query& q) {
  std::set<int> used;
  check_apart(q.body, used);

  CompiledQuery out;
  out.answer_vars = q.answer_vars;
  out.query_class = classify(q);
  out.n = q.n;
  // Self-equalities compile through a scratch column; grow the dimension
  // when there is none to spare.
  if (out.n < 2 && has_self_eq(q.body)) out.n = 2;

  Compiler c{out.n};
  ScaPtr e = c.rec(q.body);

  std::vector<int> tgts;
  for (std::size_t l = 0; l < q.answer_vars.size(); ++l)
    tgts.push_back(static_cast<int>(l) + 1);
  out.expr = place_columns(std::move(e), out.n, q.answer_vars, tgts);
  return out;
}

// ---------------------------------------------------------------------------
// SCA -> FO
// ---------------------------------------------------------------------------

namespace {

FormulaPtr pad_self_eq(FormulaPtr f, const std::set<int>& skip, int n) {
  for (int k = 1; k <= n; ++k)
    if (!skip.count(k)) f = Formula::conj(std::move(f), Formula::eq(k, k));
  return f;
}

FormulaPtr rename_vars(const FormulaPtr& f, const std::vector<int>& map) {
  auto m = [&](int v) { return map[v]; };
  switch (f->kind) {
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      for (const Term& t : f->args)
        args.push_back(t.is_var ? Term::variable(m(t.var)) : t);
      return Formula::atom(f->rel, std::move(args));
    }
    case Formula::Kind::EqAtom:
      return Formula::eq(m(f->var_i), m(f->var_j));
    case Formula::Kind::EqConst:
      return Formula::eq_const(m(f->var_i), f->sym);
    case Formula::Kind::And:
      return Formula::conj(rename_vars(f->left, map), rename_vars(f->right, map));
    case Formula::Kind::Or:
      return Formula::disj(rename_vars(f->left, map), rename_vars(f->right, map));
    case Formula::Kind::Not:
      return Formula::neg(rename_vars(f->left, map));
    case Formula::Kind::Exists:
      return Formula::exists(m(f->var_i), rename_vars(f->left, map));
    case Formula::Kind::Forall:
      return Formula::forall(m(f->var_i), rename_vars(f->left, map));
  }
  return f;
}

}  // namespace

FormulaPtr sca_to_fo(const ScaPtr& e, const Schema& schema, int n) {
  switch (e->kind) {
    case ScaExpr::Kind::RelAtom: {
      int k = schema.arity(e->rel);
      std::vector<Term> args;
      std::set<int> skip;
      for (int v = 1; v <= k; ++v) {
        args.push_back(Term::variable(v));
        skip.insert(v);
      }
      return pad_self_eq(Formula::atom(e->rel, std::move(args)), skip, n);
    }
    case ScaExpr::Kind::ConstCell:
      return pad_self_eq(Formula::eq_const(e->i, e->sym), {e->i}, n);
    case ScaExpr::Kind::Diag:
      return pad_self_eq(Formula::eq(e->i, e->j), {e->i, e->j}, n);
    case ScaExpr::Kind::Union:
      return Formula::disj(sca_to_fo(e->left, schema, n),
                           sca_to_fo(e->right, schema, n));
    case ScaExpr::Kind::Intersect:
      return Formula::conj(sca_to_fo(e->left, schema, n),
                           sca_to_fo(e->right, schema, n));
    case ScaExpr::Kind::Complement:
      return Formula::neg(sca_to_fo(e->left, schema, n));
    case ScaExpr::Kind::OuterCyl:
      return Formula::conj(
          Formula::exists(e->i, sca_to_fo(e->left, schema, n)),
          Formula::eq(e->i, e->i));
    case ScaExpr::Kind::InnerCyl:
      return Formula::conj(
          Formula::forall(e->i, sca_to_fo(e->left, schema, n)),
          Formula::eq(e->i, e->i));
    case ScaExpr::Kind::Swap: {
      std::vector<int> map(n + 1);
      for (int v = 0; v <= n; ++v) map[v] = v;
      for (auto [i, j] : e->pairs) std::swap(map[i], map[j]);
      return rename_vars(sca_to_fo(e->left, schema, n), map);
    }
  }
  throw semantic_error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

StarCylinder evaluate(const ScaPtr& e, const std::vector<StarCylinder>& db,
                      const EvalContext& ctx, const EvalOptions& opts) {
  switch (e->kind) {
    case ScaExpr::Kind::RelAtom: {
      if (e->rel < 0 || e->rel >= static_cast<int>(db.size()))
        throw semantic_error("expression references an unknown relation");
      const StarCylinder& c = db[e->rel];
      if (c.dim() != ctx.dim())
        throw semantic_error("database cylinder not expanded to dimension " +
                             std::to_string(ctx.dim()));
      return c;
    }
    case ScaExpr::Kind::ConstCell: {
      std::vector<Value> entries(ctx.dim(), Value::star());
      entries[e->i - 1] = Value::constant(e->sym);
      auto t = StarTuple::normalize(std::move(entries), {});
      return StarCylinder::make(ctx.dim(), Flavor::Positive, {*t});
    }
    case ScaExpr::Kind::Diag:
      return star_diagonal(ctx, e->i, e->j);
    case ScaExpr::Kind::Union: {
      StarCylinder u = star_union(evaluate(e->left, db, ctx, opts),
                                  evaluate(e->right, db, ctx, opts));
      return opts.reduce_unions ? reduce(u) : u;
    }
    case ScaExpr::Kind::Intersect:
      return star_intersection(evaluate(e->left, db, ctx, opts),
                               evaluate(e->right, db, ctx, opts));
    case ScaExpr::Kind::Complement: {
      StarCylinder c = evaluate(e->left, db, ctx, opts);
      if (c.has_enull())
        throw semantic_error(
            "query requires complement, which is unsupported over "
            "existential nulls");
      if (ctx.dim() > opts.sieve_dim_cap)
        throw budget_error("sieve dimension " + std::to_string(ctx.dim()) +
                           " exceeds the cap of " +
                           std::to_string(opts.sieve_dim_cap));
      return complement(ctx, c);
    }
    case ScaExpr::Kind::OuterCyl:
      return outer_cyl(evaluate(e->left, db, ctx, opts), e->i);
    case ScaExpr::Kind::InnerCyl: {
      StarCylinder c = evaluate(e->left, db, ctx, opts);
      if (!c.has_extended_literal()) return inner_cyl_positive(c, e->i);
      if (c.has_enull())
        throw semantic_error(
            "inner cylindrification over existential nulls requires a "
            "condition-free cylinder");
      if (ctx.dim() > opts.sieve_dim_cap)
        throw budget_error("sieve dimension " + std::to_string(ctx.dim()) +
                           " exceeds the cap of " +
                           std::to_string(opts.sieve_dim_cap));
      return inner_cyl_extended(ctx, c, e->i);
    }
    case ScaExpr::Kind::Swap:
      return swap(evaluate(e->left, db, ctx, opts), e->pairs);
  }
  throw semantic_error("unreachable expression kind");
}

StarCylinder expand_cylinder(const StarCylinder& c, int n) {
  if (n < c.dim())
    throw semantic_error("expansion dimension " + std::to_string(n) +
                         " below relation arity " + std::to_string(c.dim()));
  if (n == c.dim()) return c;
  std::vector<StarTuple> out;
  out.reserve(c.size());
  for (const StarTuple& t : c.tuples()) {
    std::vector<Value> entries = t.entries();
    entries.resize(n, Value::star());
    auto e = StarTuple::normalize(std::move(entries), t.cond());
    assert(e.has_value());
    out.push_back(std::move(*e));
  }
  return StarCylinder::make(n, c.flavor(), std::move(out));
}

StarCylinder project_answer(const StarCylinder& full, int k) {
  StarCylinder c = full;
  for (int i = k + 1; i <= full.dim(); ++i) c = outer_cyl(c, i);
  if (k == full.dim()) return reduce(c);
  std::vector<StarTuple> out;
  for (const StarTuple& t : c.tuples()) {
    std::vector<Value> entries(t.entries().begin(), t.entries().begin() + k);
    auto p = StarTuple::normalize(std::move(entries), t.cond());
    assert(p.has_value());
    out.push_back(std::move(*p));
  }
  return reduce(StarCylinder::make(k, c.flavor(), std::move(out)));
}

bool cylinder_member(const std::vector<std::string>& tuple,
                     const StarCylinder& c) {
  if (static_cast<int>(tuple.size()) != c.dim())
    throw semantic_error("tuple arity does not match the cylinder dimension");
  std::vector<Value> entries;
  entries.reserve(tuple.size());
  for (const std::string& s : tuple) entries.push_back(Value::constant(s));
  auto t = StarTuple::normalize(std::move(entries), {});
  for (const StarTuple& row : c.tuples())
    if (dominates(*t, row)) return true;
  return false;
}

namespace {

void collect_rels(const ScaPtr& e, std::set<int>& rels) {
  if (e->kind == ScaExpr::Kind::RelAtom) rels.insert(e->rel);
  if (e->left) collect_rels(e->left, rels);
  if (e->right) collect_rels(e->right, rels);
}

}  // namespace

QueryRun run_query(const Schema& schema, const std::vector<StarCylinder>& stored,
                   const Query& q, const EvalOptions& opts) {
  if (stored.size() != schema.relations.size())
    throw semantic_error("database does not match the schema");
  CompiledQuery compiled = compile(q);

  std::set<int> rels;
  collect_rels(compiled.expr, rels);

  std::set<std::string> adom;
  for (const StarCylinder& c : stored)
    for (const std::string& s : c.constants()) adom.insert(s);
  std::function<void(const ScaPtr&)> consts = [&](const ScaPtr& e) {
    if (e->kind == ScaExpr::Kind::ConstCell) adom.insert(e->sym);
    if (e->left) consts(e->left);
    if (e->right) consts(e->right);
  };
  consts(compiled.expr);

  std::vector<StarCylinder> db;
  db.reserve(stored.size());
  for (std::size_t p = 0; p < stored.size(); ++p) {
    if (rels.count(static_cast<int>(p)))
      db.push_back(expand_cylinder(stored[p], compiled.n));
    else
      db.push_back(StarCylinder(compiled.n, Flavor::Positive));
  }

  EvalContext ctx(compiled.n, std::move(adom));
  StarCylinder full = evaluate(compiled.expr, db, ctx, opts);
  StarCylinder answer = project_answer(full, compiled.answer_arity());
  return QueryRun(std::move(compiled), std::move(full), std::move(answer));
}

}  // namespace starcyl
