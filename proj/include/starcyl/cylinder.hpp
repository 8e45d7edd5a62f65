#pragma once

#include <vector>

#include "starcyl/tuple.hpp"

namespace starcyl {

// A finite set of normal-form star-tuples of one dimension. Tuples are
// kept sorted and deduplicated, so equal cylinders compare equal and
// print identically.
class StarCylinder {
 public:
  StarCylinder(int dim, Flavor flavor) : dim_(dim), flavor_(flavor) {
    if (dim < 1) throw semantic_error("cylinder dimension must be positive");
  }

  static StarCylinder make(int dim, Flavor flavor,
                           std::vector<StarTuple> tuples);

  int dim() const { return dim_; }
  Flavor flavor() const { return flavor_; }
  const std::vector<StarTuple>& tuples() const { return tuples_; }
  bool empty() const { return tuples_.empty(); }
  std::size_t size() const { return tuples_.size(); }

  void insert(StarTuple t);

  bool has_enull() const;
  bool has_extended_literal() const;

  // Constants appearing in entries or literal payloads.
  std::vector<std::string> constants() const;
  std::vector<int> enull_ids() const;

  std::string to_string() const;

  friend bool operator==(const StarCylinder& a, const StarCylinder& b) {
    return a.dim_ == b.dim_ && a.tuples_ == b.tuples_;
  }

 private:
  void check_tuple(const StarTuple& t) const;

  int dim_;
  Flavor flavor_;
  std::vector<StarTuple> tuples_;
};

// Cylinder dominance: every tuple of c is dominated by some tuple of d.
// For positive cylinders this decides [[c]] subset-of [[d]].
bool cyl_dominates(const StarCylinder& c, const StarCylinder& d);

// Removes tuples dominated by another tuple; the represented set is
// unchanged.
StarCylinder reduce(const StarCylinder& c);

}  // namespace starcyl
