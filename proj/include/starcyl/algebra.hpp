#pragma once

#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "starcyl/cylinder.hpp"

namespace starcyl {

// Ambient evaluation context: dimension plus the active domain A of the
// whole query + database. The sieve partition of D^n refined by A is
// built lazily and memoized; it backs complement, extended inner
// cylindrification, and the containment check of extended cylinders.
class EvalContext {
 public:
  EvalContext(int dim, std::set<std::string> adom)
      : dim_(dim), adom_(std::move(adom)) {}

  int dim() const { return dim_; }
  const std::set<std::string>& adom() const { return adom_; }
  bool in_adom(const std::string& sym) const { return adom_.count(sym) > 0; }

  const StarCylinder& sieve() const;

 private:
  int dim_;
  std::set<std::string> adom_;
  mutable std::mutex mu_;
  mutable std::shared_ptr<const StarCylinder> sieve_cache_;
};

// Positive operators.
StarCylinder star_diagonal(const EvalContext& ctx, int i, int j);
StarCylinder star_diagonal(int dim, int i, int j);
StarCylinder star_union(const StarCylinder& c, const StarCylinder& d);
StarCylinder star_intersection(const StarCylinder& c, const StarCylinder& d);
StarCylinder outer_cyl(const StarCylinder& c, int i);
StarCylinder inner_cyl_positive(const StarCylinder& c, int i);

// Column swaps; pairs must be pairwise disjoint.
StarCylinder swap(const StarCylinder& c,
                  const std::vector<std::pair<int, int>>& pairs);

// Extended operators (sieve-based).
StarCylinder sieve(const EvalContext& ctx);
StarCylinder complement(const EvalContext& ctx, const StarCylinder& c);
StarCylinder inner_cyl_extended(const EvalContext& ctx, const StarCylinder& c,
                                int i);

// [[c]] subset-of [[d]] via the common sieve (sound for extended
// cylinders, where plain dominance may under-approximate).
bool sieve_containment(const EvalContext& ctx, const StarCylinder& c,
                       const StarCylinder& d);
bool sieve_equal(const EvalContext& ctx, const StarCylinder& c,
                 const StarCylinder& d);

}  // namespace starcyl
