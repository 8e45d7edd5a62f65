#include "starcyl/algebra.hpp"

#include <algorithm>
#include <cassert>

namespace starcyl {

namespace {

void check_col(int col, int dim) {
  if (col < 1 || col > dim)
    throw semantic_error("column index " + std::to_string(col) +
                         " out of range for dimension " + std::to_string(dim));
}

void check_adom_covers(const EvalContext& ctx, const StarCylinder& c) {
  for (const std::string& sym : c.constants())
    if (!ctx.in_adom(sym))
      throw semantic_error("constant '" + sym +
                           "' outside the active domain of the context");
  if (c.dim() != ctx.dim())
    throw semantic_error("cylinder dimension does not match context");
}

}  // namespace

StarCylinder star_diagonal(int dim, int i, int j) {
  check_col(i, dim);
  check_col(j, dim);
  if (i >= j) throw semantic_error("diagonal requires i < j");
  auto t = StarTuple::normalize(std::vector<Value>(dim, Value::star()),
                                {Literal::eq(i, j)});
  return StarCylinder::make(dim, Flavor::Positive, {*t});
}

StarCylinder star_diagonal(const EvalContext& ctx, int i, int j) {
  return star_diagonal(ctx.dim(), i, j);
}

StarCylinder star_union(const StarCylinder& c, const StarCylinder& d) {
  if (c.dim() != d.dim())
    throw semantic_error("union requires equal dimensions");
  std::vector<StarTuple> ts = c.tuples();
  ts.insert(ts.end(), d.tuples().begin(), d.tuples().end());
  return StarCylinder::make(c.dim(), flavor_join(c.flavor(), d.flavor()),
                            std::move(ts));
}

StarCylinder star_intersection(const StarCylinder& c, const StarCylinder& d) {
  if (c.dim() != d.dim())
    throw semantic_error("intersection requires equal dimensions");
  Flavor f = flavor_join(c.flavor(), d.flavor());
  std::vector<StarTuple> out;
  out.reserve(c.size());
  for (const StarTuple& t : c.tuples())
    for (const StarTuple& u : d.tuples())
      if (auto m = meet(t, u)) out.push_back(std::move(*m));
  return StarCylinder::make(c.dim(), f, std::move(out));
}

StarCylinder outer_cyl(const StarCylinder& c, int i) {
  check_col(i, c.dim());
  std::vector<StarTuple> out;
  out.reserve(c.size());
  for (const StarTuple& t : c.tuples()) {
    std::vector<Value> entries = t.entries();
    entries[i - 1] = Value::star();
    std::vector<Literal> lits;
    for (const Literal& l : t.cond())
      if (l.i != i && (l.kind == Literal::Kind::NeqConst || l.j != i))
        lits.push_back(l);
    auto n = StarTuple::normalize(std::move(entries), std::move(lits));
    assert(n.has_value());  // dropping literals cannot make a tuple unsat
    out.push_back(std::move(*n));
  }
  return StarCylinder::make(c.dim(), c.flavor(), std::move(out));
}

StarCylinder inner_cyl_positive(const StarCylinder& c, int i) {
  check_col(i, c.dim());
  if (c.has_extended_literal())
    throw semantic_error(
        "positive inner cylindrification applied to an extended cylinder");
  std::vector<StarTuple> out;
  for (const StarTuple& t : c.tuples()) {
    if (!t.entry(i).is_star()) continue;
    bool touches = false;
    for (const Literal& l : t.cond())
      if (l.i == i || (l.kind != Literal::Kind::NeqConst && l.j == i)) {
        touches = true;
        break;
      }
    if (!touches) out.push_back(t);
  }
  return StarCylinder::make(c.dim(), c.flavor(), std::move(out));
}

StarCylinder swap(const StarCylinder& c,
                  const std::vector<std::pair<int, int>>& pairs) {
  std::vector<StarTuple> out;
  out.reserve(c.size());
  for (const StarTuple& t : c.tuples()) out.push_back(t.swapped(pairs));
  return StarCylinder::make(c.dim(), c.flavor(), std::move(out));
}

// Sieve construction. For each pattern t in (A u {*})^n the satisfiable
// condition choices over the star positions are exactly the set
// partitions of those positions: blocks carry (i=j), cross-block pairs
// carry (i!=j), and every star position excludes every constant of A.
const StarCylinder& EvalContext::sieve() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (sieve_cache_) return *sieve_cache_;

  const int n = dim_;
  std::vector<std::string> consts(adom_.begin(), adom_.end());
  const int base = static_cast<int>(consts.size()) + 1;

  auto result = std::make_shared<StarCylinder>(n, Flavor::Extended);

  // Patterns enumerated in mixed radix: digit 0 is "*", digit k is the
  // k-th constant.
  std::vector<int> digits(n, 0);
  for (;;) {
    std::vector<Value> entries(n, Value::star());
    std::vector<int> star_cols;
    for (int i = 0; i < n; ++i) {
      if (digits[i] == 0)
        star_cols.push_back(i + 1);
      else
        entries[i] = Value::constant(consts[digits[i] - 1]);
    }

    // Restricted growth strings enumerate the partitions of star_cols.
    const int s = static_cast<int>(star_cols.size());
    std::vector<int> block(s, 0);
    for (;;) {
      std::vector<Literal> lits;
      for (int col : star_cols)
        for (const std::string& a : consts)
          lits.push_back(Literal::neq_const(col, a));
      for (int p = 0; p < s; ++p)
        for (int q = p + 1; q < s; ++q) {
          if (block[p] == block[q])
            lits.push_back(Literal::eq(star_cols[p], star_cols[q]));
          else
            lits.push_back(Literal::neq_col(star_cols[p], star_cols[q]));
        }
      auto t = StarTuple::normalize(entries, std::move(lits));
      assert(t.has_value());
      result->insert(std::move(*t));

      // Next restricted growth string: block[p] <= max(block[0..p-1]) + 1.
      int p = s - 1;
      for (; p > 0; --p) {
        int mx = 0;
        for (int q = 0; q < p; ++q) mx = std::max(mx, block[q]);
        if (block[p] <= mx) break;
      }
      if (p <= 0) break;
      ++block[p];
      for (int q = p + 1; q < s; ++q) block[q] = 0;
    }

    int i = n - 1;
    for (; i >= 0; --i) {
      if (++digits[i] < base) break;
      digits[i] = 0;
    }
    if (i < 0) break;
  }

  sieve_cache_ = std::move(result);
  return *sieve_cache_;
}

StarCylinder sieve(const EvalContext& ctx) { return ctx.sieve(); }

StarCylinder complement(const EvalContext& ctx, const StarCylinder& c) {
  if (c.flavor() == Flavor::Naive || c.has_enull())
    throw semantic_error("complement is undefined for naive star-cylinders");
  check_adom_covers(ctx, c);
  std::vector<StarTuple> out;
  for (const StarTuple& t : ctx.sieve().tuples()) {
    bool disjoint = true;
    for (const StarTuple& u : c.tuples())
      if (meet(t, u)) {
        disjoint = false;
        break;
      }
    if (disjoint) out.push_back(t);
  }
  return StarCylinder::make(ctx.dim(), Flavor::Extended, std::move(out));
}

StarCylinder inner_cyl_extended(const EvalContext& ctx, const StarCylinder& c,
                                int i) {
  check_col(i, ctx.dim());
  if (c.flavor() == Flavor::Naive || c.has_enull())
    throw semantic_error(
        "extended inner cylindrification is undefined for naive "
        "star-cylinders");
  check_adom_covers(ctx, c);
  StarCylinder refined = star_intersection(c, ctx.sieve());
  std::vector<StarTuple> out;
  for (const StarTuple& t : refined.tuples()) {
    StarCylinder single = StarCylinder::make(ctx.dim(), refined.flavor(), {t});
    StarCylinder opened = star_intersection(outer_cyl(single, i), ctx.sieve());
    if (cyl_dominates(opened, refined)) out.push_back(t);
  }
  return StarCylinder::make(ctx.dim(), Flavor::Extended, std::move(out));
}

bool sieve_containment(const EvalContext& ctx, const StarCylinder& c,
                       const StarCylinder& d) {
  check_adom_covers(ctx, c);
  check_adom_covers(ctx, d);
  return cyl_dominates(star_intersection(c, ctx.sieve()),
                       star_intersection(d, ctx.sieve()));
}

bool sieve_equal(const EvalContext& ctx, const StarCylinder& c,
                 const StarCylinder& d) {
  return sieve_containment(ctx, c, d) && sieve_containment(ctx, d, c);
}

}  // namespace starcyl
