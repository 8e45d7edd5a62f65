#pragma once

#include <memory>

#include "starcyl/algebra.hpp"
#include "starcyl/logic.hpp"

namespace starcyl {

struct ScaExpr;
using ScaPtr = std::shared_ptr<const ScaExpr>;

// Cylindric star-algebra expression tree. Leaves are stored relations
// (expanded to the query dimension), diagonals, and single-constant
// selection cells; inner nodes are union, intersection, complement,
// outer/inner cylindrification and column swaps.
struct ScaExpr {
  enum class Kind {
    RelAtom,
    ConstCell,  // all-star row with one constant column: selection by constant
    Diag,
    Union,
    Intersect,
    Complement,
    OuterCyl,
    InnerCyl,
    Swap
  };

  Kind kind;
  int rel = -1;     // RelAtom: relation ordinal
  int i = 0, j = 0; // Diag(i, j); cylindrification / ConstCell column i
  std::string sym;  // ConstCell constant
  std::vector<std::pair<int, int>> pairs;  // Swap: disjoint transpositions
  ScaPtr left, right;

  static ScaPtr rel_atom(int rel);
  static ScaPtr const_cell(int i, std::string sym);
  static ScaPtr diag(int i, int j);
  static ScaPtr set_union(ScaPtr l, ScaPtr r);
  static ScaPtr intersect(ScaPtr l, ScaPtr r);
  static ScaPtr complement_of(ScaPtr f);
  static ScaPtr outer(int i, ScaPtr f);
  static ScaPtr inner(int i, ScaPtr f);
  static ScaPtr swapped(std::vector<std::pair<int, int>> pairs, ScaPtr f);

  std::string to_string() const;
};

bool sca_equal(const ScaPtr& a, const ScaPtr& b);

struct CompiledQuery {
  ScaPtr expr;  // value carries the answer variables at columns 1..k
  int n = 0;    // evaluation dimension (may exceed the query's n by one)
  std::vector<int> answer_vars;
  QueryClass query_class = QueryClass::Positive;

  int answer_arity() const { return static_cast<int>(answer_vars.size()); }
};

// FO -> SCA translation. Atoms become swapped relation leaves, equality
// atoms diagonals, connectives the corresponding set operators and
// quantifiers cylindrifications; a final swap moves the answer columns
// to positions 1..k. The query must be in normalized (apart) form.
CompiledQuery compile(const Query& q);

// The reverse SCA -> FO translation, used for round-trip testing.
FormulaPtr sca_to_fo(const ScaPtr& e, const Schema& schema, int n);

struct EvalOptions {
  bool reduce_unions = false;
  int sieve_dim_cap = 8;  // refuse sieve construction above this dimension
};

// Bottom-up evaluation over a sequence of n-dimensional star-cylinders
// indexed by relation ordinal. Complement and extended inner
// cylindrification consult the context's sieve; naive cylinders reaching
// them are rejected.
StarCylinder evaluate(const ScaPtr& e, const std::vector<StarCylinder>& db,
                      const EvalContext& ctx, const EvalOptions& opts = {});

// n-expansion of a k-ary star-relation: columns k+1..n are filled with
// "*" and the condition column is carried along unchanged.
StarCylinder expand_cylinder(const StarCylinder& c, int n);

// End-to-end pipeline: expand the stored relations the query mentions,
// evaluate, and project the answer columns.
struct QueryRun {
  CompiledQuery compiled;
  StarCylinder full;    // n-dimensional value, answers at columns 1..k
  StarCylinder answer;  // k-dimensional projection, reduced
  QueryRun(CompiledQuery c, StarCylinder f, StarCylinder a)
      : compiled(std::move(c)), full(std::move(f)), answer(std::move(a)) {}
};

QueryRun run_query(const Schema& schema, const std::vector<StarCylinder>& stored,
                   const Query& q, const EvalOptions& opts = {});

// Drops columns k+1..n from an n-dimensional result by existential
// projection (the dropped columns are cylindrified first, so conditions
// on them never leak into the answer).
StarCylinder project_answer(const StarCylinder& full, int k);

// Membership of a constant tuple in the represented set of a cylinder.
bool cylinder_member(const std::vector<std::string>& tuple,
                     const StarCylinder& c);

}  // namespace starcyl
