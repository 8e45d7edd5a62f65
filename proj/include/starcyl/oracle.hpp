#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "starcyl/sca.hpp"

namespace starcyl::oracle {

// Explicit finite-domain instance: the ground truth every property test
// compares against. Deliberately naive; nothing here touches star-tuples.
struct Instance {
  std::vector<std::string> universe;
  std::vector<std::vector<std::vector<std::string>>> relations;  // per ordinal

  int value_index(const std::string& v) const;
};

// Dense set of n-tuples over a finite universe, indexed in mixed radix.
class TupleSet {
 public:
  TupleSet(int width, int universe_size)
      : width_(width), base_(universe_size), mask_(pow(universe_size, width), 0) {}

  int width() const { return width_; }
  int base() const { return base_; }
  std::size_t capacity() const { return mask_.size(); }

  bool test(std::size_t code) const { return mask_[code] != 0; }
  void set(std::size_t code) { mask_[code] = 1; }
  std::size_t count() const;

  std::size_t encode(const std::vector<int>& digits) const;
  std::vector<int> decode(std::size_t code) const;

  TupleSet& operator|=(const TupleSet& o);
  TupleSet& operator&=(const TupleSet& o);
  TupleSet complement() const;
  bool operator==(const TupleSet& o) const {
    return width_ == o.width_ && base_ == o.base_ && mask_ == o.mask_;
  }
  bool subset_of(const TupleSet& o) const;

  // Set-level cylindric operators (Definition-level, over the finite
  // universe standing in for D).
  TupleSet outer_cyl(int col) const;  // 1-based
  TupleSet inner_cyl(int col) const;
  TupleSet swapped(const std::vector<std::pair<int, int>>& pairs) const;

  std::vector<std::vector<std::string>> tuples(
      const std::vector<std::string>& universe) const;

  static std::size_t pow(int base, int exp);

 private:
  int width_;
  int base_;
  std::vector<char> mask_;
};

// Diagonal d_ij over the finite universe.
TupleSet diagonal(int n, int universe_size, int i, int j);

// Horizontal n-expansion of an explicit k-ary relation.
TupleSet h_expand(const std::vector<std::vector<std::string>>& rel,
                  const Instance& inst, int n);

// Grounding of a star-cylinder over universe T: all T-tuples dominated by
// some row, with literals evaluated on the tuple. Throws if the cylinder
// mentions a constant outside T or contains existential nulls.
TupleSet ground(const StarCylinder& c, const std::vector<std::string>& T);

// Same, after substituting existential nulls via the given assignment
// (values must belong to T).
TupleSet ground_naive(const StarCylinder& c, const std::vector<std::string>& T,
                      const std::map<int, std::string>& null_assignment);

// Tarskian evaluation of the query body over all valuations; returns the
// mask of satisfying valuations (variable i at column i).
TupleSet eval_fo_mask(const FormulaPtr& body, int n, const Instance& inst);

// Answer projection per the query head.
std::set<std::vector<std::string>> eval_fo(const Query& q, const Instance& inst);

// Literal set-level evaluation of a CA expression over the finite
// universe, with relations horizontally expanded.
TupleSet eval_ca_set(const ScaPtr& e, const Instance& inst, int n);

// Deterministically named fresh constants avoiding a given set.
std::vector<std::string> fresh_values(const std::set<std::string>& avoid,
                                      int count);

// End-to-end differential check of the star pipeline against the
// brute-force oracle on one (database, query) pair. T is the active
// domain plus n+1+extra_fresh fresh values.
struct DiffResult {
  bool ok = true;
  std::string detail;
};
DiffResult differential_check(const Schema& schema,
                              const std::vector<StarCylinder>& stored,
                              const Query& q, int extra_fresh = 0,
                              const EvalOptions& opts = {});

}  // namespace starcyl::oracle
