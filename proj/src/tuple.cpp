#include "starcyl/tuple.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace starcyl {

namespace {

// Union-find over columns 0..n-1 used to compute the equality closure.
struct ColumnUnion {
  std::vector<int> parent;
  explicit ColumnUnion(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void merge(int a, int b) { parent[find(a)] = find(b); }
};

void check_col(int col, int dim) {
  if (col < 1 || col > dim)
    throw semantic_error("literal column index " + std::to_string(col) +
                         " out of range for dimension " + std::to_string(dim));
}

}  // namespace

std::optional<StarTuple> StarTuple::normalize(std::vector<Value> entries,
                                              std::vector<Literal> literals) {
  const int n = static_cast<int>(entries.size());
  for (const Literal& l : literals) {
    check_col(l.i, n);
    if (l.kind != Literal::Kind::NeqConst) check_col(l.j, n);
  }

  ColumnUnion uf(n);
  for (const Literal& l : literals)
    if (l.kind == Literal::Kind::Eq) uf.merge(l.i - 1, l.j - 1);

  // Propagate the (unique) singular value of each class to all members.
  // Two distinct singular values in one class are unsatisfiable.
  std::map<int, Value> class_value;
  for (int c = 0; c < n; ++c) {
    if (!entries[c].is_singular()) continue;
    int r = uf.find(c);
    auto it = class_value.find(r);
    if (it == class_value.end())
      class_value.emplace(r, entries[c]);
    else if (!(it->second == entries[c]))
      return std::nullopt;
  }
  for (int c = 0; c < n; ++c) {
    auto it = class_value.find(uf.find(c));
    if (it != class_value.end()) entries[c] = it->second;
  }

  // Class members, used to re-emit literals in closed form.
  std::map<int, std::vector<int>> members;
  for (int c = 0; c < n; ++c) members[uf.find(c)].push_back(c);

  std::set<Literal> out;
  for (const auto& [root, cols] : members) {
    (void)root;
    for (std::size_t a = 0; a < cols.size(); ++a)
      for (std::size_t b = a + 1; b < cols.size(); ++b)
        out.insert(Literal::eq(cols[a] + 1, cols[b] + 1));
  }

  // Resolve disequalities against the propagated entries. Literals that
  // survive are re-emitted for every member of the involved classes, so
  // the stored set is closed and entailment checks are pure lookups.
  for (const Literal& l : literals) {
    switch (l.kind) {
      case Literal::Kind::Eq:
        break;  // handled above
      case Literal::Kind::NeqConst: {
        const Value& v = entries[l.i - 1];
        if (v.is_const()) {
          if (v.sym() == l.sym) return std::nullopt;
          break;  // satisfied outright
        }
        if (v.is_enull()) break;  // a null is distinct from every constant
        for (int m : members[uf.find(l.i - 1)])
          out.insert(Literal::neq_const(m + 1, l.sym));
        break;
      }
      case Literal::Kind::NeqCol: {
        int ri = uf.find(l.i - 1), rj = uf.find(l.j - 1);
        if (ri == rj) return std::nullopt;
        const Value& vi = entries[l.i - 1];
        const Value& vj = entries[l.j - 1];
        if (vi.is_singular() && vj.is_singular()) {
          if (vi == vj) return std::nullopt;
          break;  // two distinct fixed values, satisfied
        }
        if (vi.is_singular() || vj.is_singular()) {
          const Value& fixed = vi.is_singular() ? vi : vj;
          int star_root = vi.is_singular() ? rj : ri;
          if (!fixed.is_const())
            throw semantic_error(
                "inequality between a star column and an existential null "
                "is not representable");
          for (int m : members[star_root])
            out.insert(Literal::neq_const(m + 1, fixed.sym()));
          break;
        }
        for (int mi : members[ri])
          for (int mj : members[rj]) out.insert(Literal::neq_col(mi + 1, mj + 1));
        break;
      }
    }
  }

  StarTuple t;
  t.entries_ = std::move(entries);
  t.cond_.assign(out.begin(), out.end());
  return t;
}

StarTuple StarTuple::all_star(int dim) {
  auto t = normalize(std::vector<Value>(dim, Value::star()), {});
  return *t;
}

bool StarTuple::has_enull() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const Value& v) { return v.is_enull(); });
}

bool StarTuple::has_extended_literal() const {
  return std::any_of(cond_.begin(), cond_.end(), [](const Literal& l) {
    return l.kind != Literal::Kind::Eq;
  });
}

StarTuple StarTuple::swapped(const std::vector<std::pair<int, int>>& pairs) const {
  const int n = dim();
  std::vector<int> dest(n + 1);
  for (int i = 1; i <= n; ++i) dest[i] = i;
  std::set<int> seen;
  for (auto [i, j] : pairs) {
    check_col(i, n);
    check_col(j, n);
    if (!seen.insert(i).second || (i != j && !seen.insert(j).second))
      throw semantic_error("swap pairs must be pairwise disjoint");
    dest[i] = j;
    dest[j] = i;
  }
  std::vector<Value> entries(n, Value::star());
  for (int i = 1; i <= n; ++i) entries[dest[i] - 1] = entries_[i - 1];
  std::vector<Literal> lits;
  lits.reserve(cond_.size());
  for (const Literal& l : cond_) {
    if (l.kind == Literal::Kind::NeqConst)
      lits.push_back(Literal::neq_const(dest[l.i], l.sym));
    else if (l.kind == Literal::Kind::Eq)
      lits.push_back(Literal::eq(dest[l.i], dest[l.j]));
    else
      lits.push_back(Literal::neq_col(dest[l.i], dest[l.j]));
  }
  auto t = normalize(std::move(entries), std::move(lits));
  assert(t.has_value());  // renaming preserves satisfiability
  return *t;
}

std::string StarTuple::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dim(); ++i) {
    if (i) os << ",";
    os << entries_[i].to_string();
  }
  if (!cond_.empty()) {
    os << ",{";
    for (std::size_t i = 0; i < cond_.size(); ++i) {
      if (i) os << ",";
      os << cond_[i].to_string();
    }
    os << "}";
  }
  os << ")";
  return os.str();
}

namespace {

bool value_dominated(const Value& t, const Value& u) {
  return u.is_star() || t == u;
}

bool has_literal(const std::vector<Literal>& cond, const Literal& l) {
  return std::binary_search(cond.begin(), cond.end(), l);
}

// Does normal-form tuple t entail t(i) != t(j)?
bool entails_neq_col(const StarTuple& t, int i, int j) {
  const Value& vi = t.entry(i);
  const Value& vj = t.entry(j);
  if (vi.is_singular() && vj.is_singular()) return !(vi == vj);
  if (vi.is_star() && vj.is_star())
    return has_literal(t.cond(), Literal::neq_col(i, j));
  const Value& fixed = vi.is_singular() ? vi : vj;
  int star_col = vi.is_singular() ? j : i;
  return fixed.is_const() &&
         has_literal(t.cond(), Literal::neq_const(star_col, fixed.sym()));
}

bool entails_neq_const(const StarTuple& t, int i, const std::string& sym) {
  const Value& v = t.entry(i);
  if (v.is_const()) return v.sym() != sym;
  if (v.is_enull()) return true;
  return has_literal(t.cond(), Literal::neq_const(i, sym));
}

}  // namespace

bool dominates(const StarTuple& t, const StarTuple& u) {
  if (t.dim() != u.dim())
    throw semantic_error("dominance requires equal dimensions");
  for (int i = 1; i <= t.dim(); ++i)
    if (!value_dominated(t.entry(i), u.entry(i))) return false;
  for (const Literal& l : u.cond()) {
    switch (l.kind) {
      case Literal::Kind::Eq:
        if (t.entry(l.i).is_star() && t.entry(l.j).is_star()) {
          if (!has_literal(t.cond(), l)) return false;
        } else if (!(t.entry(l.i) == t.entry(l.j))) {
          return false;
        }
        break;
      case Literal::Kind::NeqCol:
        if (!entails_neq_col(t, l.i, l.j)) return false;
        break;
      case Literal::Kind::NeqConst:
        if (!entails_neq_const(t, l.i, l.sym)) return false;
        break;
    }
  }
  return true;
}

std::optional<StarTuple> meet(const StarTuple& t, const StarTuple& u) {
  if (t.dim() != u.dim()) throw semantic_error("meet requires equal dimensions");
  std::vector<Value> entries;
  entries.reserve(t.dim());
  for (int i = 1; i <= t.dim(); ++i) {
    const Value& a = t.entry(i);
    const Value& b = u.entry(i);
    if (a.is_star())
      entries.push_back(b);
    else if (b.is_star())
      entries.push_back(a);
    else if (a == b)
      entries.push_back(a);
    else
      return std::nullopt;  // two distinct fixed values
  }
  std::vector<Literal> lits = t.cond();
  lits.insert(lits.end(), u.cond().begin(), u.cond().end());
  return StarTuple::normalize(std::move(entries), std::move(lits));
}

}  // namespace starcyl
