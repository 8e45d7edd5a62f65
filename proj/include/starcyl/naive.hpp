#pragma once

#include <map>

#include "starcyl/sca.hpp"

namespace starcyl {

// Possible-world homomorphism: identity on constants and "*", maps
// existential nulls to constants or other nulls.
struct PwHom {
  std::map<int, Value> mapping;

  Value apply(const Value& v) const {
    if (!v.is_enull()) return v;
    auto it = mapping.find(v.null_id());
    if (it == mapping.end())
      throw semantic_error("homomorphism is partial on null ?" +
                           std::to_string(v.null_id()));
    return it->second;
  }
};

// Entrywise application followed by renormalization; rows whose
// conditions become unsatisfiable are dropped.
StarCylinder apply_hom(const PwHom& h, const StarCylinder& c);

// Keeps exactly the rows without existential nulls (the down-arrow
// restriction).
StarCylinder downarrow(const StarCylinder& c);

// Certain answers of a positive query (universal quantification allowed)
// over a stored database with universal and existential nulls: evaluate
// naively, restrict to null-free rows, project the head columns.
StarCylinder certain_answer(const Schema& schema,
                            const std::vector<StarCylinder>& stored,
                            const Query& q, const EvalOptions& opts = {});

// Certain membership decided by enumerating every homomorphism from the
// database nulls into the active domain plus one fresh constant per
// null. Handles inequality-only negation; refuses when the null count
// exceeds the budget.
bool certain_membership_bruteforce(const std::vector<std::string>& tuple,
                                   const Query& q, const Schema& schema,
                                   const std::vector<StarCylinder>& stored,
                                   int budget, const EvalOptions& opts = {});

// Rep([[c]]) subset-of Rep([[d]]): searches for a homomorphism h over
// d's nulls with h(d) dominated by c.
bool rep_containment(const StarCylinder& c, const StarCylinder& d, int budget);

// View containment over naive databases: for every world of c there is a
// world of d on which the two positive expressions agree. Equality of
// the evaluated star-cylinders is decided through the common sieve.
bool view_containment_bruteforce(const ScaPtr& e1,
                                 const std::vector<StarCylinder>& db1,
                                 const ScaPtr& e2,
                                 const std::vector<StarCylinder>& db2, int n,
                                 int budget, const EvalOptions& opts = {});

// All homomorphisms from the given nulls into the target values.
std::vector<PwHom> enumerate_homs(const std::vector<int>& null_ids,
                                  const std::vector<Value>& targets);

}  // namespace starcyl
