#pragma once

#include <optional>
#include <vector>

#include "starcyl/value.hpp"

namespace starcyl {

// A star-tuple in normal form: the condition set is satisfiable, closed
// under equality transitivity, equalities are reflected in the entries
// (equal columns hold the same value, constants propagate through
// equality classes), and (i!=a) literals only remain on "*" columns.
//
// Unsatisfiable tuples are never materialized; normalization yields
// std::nullopt instead (the paper's t_empty).
class StarTuple {
 public:
  // Builds the unique normal form, or nullopt if entries + literals are
  // unsatisfiable. Throws semantic_error for out-of-range column indexes
  // (a structural error, distinct from unsatisfiability).
  static std::optional<StarTuple> normalize(std::vector<Value> entries,
                                            std::vector<Literal> literals);

  // The unconstrained all-star tuple t_D^n.
  static StarTuple all_star(int dim);

  int dim() const { return static_cast<int>(entries_.size()); }
  const std::vector<Value>& entries() const { return entries_; }
  const std::vector<Literal>& cond() const { return cond_; }
  const Value& entry(int col) const { return entries_.at(col - 1); }  // 1-based

  bool has_enull() const;
  bool has_extended_literal() const;

  // Column permutation: swaps entries and renames literal columns for each
  // pair, then re-canonicalizes. Pairs must be pairwise disjoint.
  StarTuple swapped(const std::vector<std::pair<int, int>>& pairs) const;

  std::string to_string() const;

  friend bool operator==(const StarTuple& a, const StarTuple& b) {
    return a.entries_ == b.entries_ && a.cond_ == b.cond_;
  }
  friend bool operator<(const StarTuple& a, const StarTuple& b) {
    return std::tie(a.entries_, a.cond_) < std::tie(b.entries_, b.cond_);
  }

 private:
  StarTuple() = default;
  std::vector<Value> entries_;
  std::vector<Literal> cond_;  // sorted, deduplicated, closed
};

// Dominance t <= u: u represents a superset of t. Entrywise a<=a, *<=*,
// a<=*, plus every condition of u must be entailed by t.
bool dominates(const StarTuple& t, const StarTuple& u);

// Meet of two star-tuples: greatest lower bound under dominance
// (implements intersection). nullopt when the combination is
// unsatisfiable.
std::optional<StarTuple> meet(const StarTuple& t, const StarTuple& u);

}  // namespace starcyl
