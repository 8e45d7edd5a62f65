#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "starcyl/value.hpp"

namespace starcyl {

struct Schema {
  // Ordered (name, arity) pairs; the equality symbol is implicit.
  std::vector<std::pair<std::string, int>> relations;

  int find(const std::string& name) const {
    for (std::size_t p = 0; p < relations.size(); ++p)
      if (relations[p].first == name) return static_cast<int>(p);
    return -1;
  }
  int arity(int p) const { return relations.at(p).second; }
  const std::string& name(int p) const { return relations.at(p).first; }
};

// An atom argument: a variable index or a domain constant. Constants are
// rewritten into fresh variables plus constant-equality conjuncts by
// normalize_vars, so compiled formulas carry variables only.
struct Term {
  bool is_var = true;
  int var = 0;
  std::string sym;

  static Term variable(int v) { return Term{true, v, {}}; }
  static Term constant(std::string s) { return Term{false, 0, std::move(s)}; }
  friend bool operator==(const Term& a, const Term& b) {
    return a.is_var == b.is_var && a.var == b.var && a.sym == b.sym;
  }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    Atom,     // rel(args...)
    EqAtom,   // x_i ~ x_j
    EqConst,  // x_i ~ c
    And,
    Or,
    Not,
    Exists,
    Forall
  };

  Kind kind;
  int rel = -1;             // Atom
  std::vector<Term> args;   // Atom
  int var_i = 0, var_j = 0; // EqAtom / EqConst / quantifier variable (var_i)
  std::string sym;          // EqConst
  FormulaPtr left, right;

  static FormulaPtr atom(int rel, std::vector<Term> args);
  static FormulaPtr eq(int i, int j);
  static FormulaPtr eq_const(int i, std::string sym);
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr neg(FormulaPtr f);
  static FormulaPtr exists(int var, FormulaPtr f);
  static FormulaPtr forall(int var, FormulaPtr f);
};

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

struct Query {
  std::vector<int> answer_vars;  // head order
  FormulaPtr body;
  int n = 0;  // number of variable positions x1..xn
};

// Free variables of a formula, in increasing index order.
std::vector<int> free_vars(const FormulaPtr& f);
int max_var(const FormulaPtr& f);

// Syntactic query class; gates naive-null evaluation and picks the
// complexity regime.
enum class QueryClass {
  Positive,
  PositiveWithForall,
  InequalityOnlyNegation,
  FullFO
};
QueryClass classify(const Query& q);
const char* query_class_name(QueryClass c);

// Parses "x4 . exists x2 exists x3 forall x1 (F(x1,x2) & H(x3,x4) & x2 ~ x3)".
// Surface syntax: head variables, '.', then a body over 'exists xi',
// 'forall xi', '&', '|', '!', '~' (equality), relation atoms and
// parentheses. Constants may appear as atom arguments and on one side of
// '~'. The result is normalized via normalize_vars unless disabled.
Query parse_query(const std::string& text, const Schema& schema,
                  bool normalize = true);

// Rewrites the query so every relation-atom argument is a variable used
// by no other atom occurrence; repeated or constant arguments become
// fresh existentially quantified variables linked back with equality
// conjuncts. Preserves the query answer.
Query normalize_vars(const Query& q);

// Canonical text form; parse_query(print_query(q, s), s, false) == q.
std::string print_query(const Query& q, const Schema& schema);
std::string print_formula(const FormulaPtr& f, const Schema& schema);

}  // namespace starcyl
