#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "starcyl/io.hpp"
#include "starcyl/naive.hpp"
#include "starcyl/oracle.hpp"

namespace testutil {

using starcyl::Flavor;
using starcyl::Formula;
using starcyl::FormulaPtr;
using starcyl::Literal;
using starcyl::Query;
using starcyl::Schema;
using starcyl::StarCylinder;
using starcyl::StarTuple;
using starcyl::Term;
using starcyl::Value;

using Rng = std::mt19937_64;

inline Value C(const std::string& s) { return Value::constant(s); }
inline Value S() { return Value::star(); }
inline Value N(int id) { return Value::enull(id); }

inline StarTuple tup(std::vector<Value> entries,
                     std::vector<Literal> lits = {}) {
  auto t = StarTuple::normalize(std::move(entries), std::move(lits));
  if (!t) throw std::logic_error("test tuple is unsatisfiable");
  return *t;
}

inline int pick(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

inline bool chance(Rng& rng, double p) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  return d(rng) < p;
}

// Random star-tuple; nullopt when the drawn literals are unsatisfiable.
inline std::optional<StarTuple> random_tuple(
    Rng& rng, int dim, const std::vector<std::string>& consts, bool extended,
    int max_enull = 0) {
  std::vector<Value> entries;
  for (int i = 0; i < dim; ++i) {
    int r = pick(rng, 0, 99);
    if (r < 45)
      entries.push_back(S());
    else if (r < 90 || max_enull == 0)
      entries.push_back(C(consts[pick(rng, 0, consts.size() - 1)]));
    else
      entries.push_back(N(pick(rng, 1, max_enull)));
  }
  std::vector<Literal> lits;
  int nlits = pick(rng, 0, dim);
  for (int l = 0; l < nlits; ++l) {
    int i = pick(rng, 1, dim);
    int j = pick(rng, 1, dim);
    int kind = extended ? pick(rng, 0, 2) : 0;
    if (kind == 2) {
      lits.push_back(
          Literal::neq_const(i, consts[pick(rng, 0, consts.size() - 1)]));
    } else if (i != j) {
      lits.push_back(kind == 0 ? Literal::eq(i, j) : Literal::neq_col(i, j));
    }
  }
  return StarTuple::normalize(std::move(entries), std::move(lits));
}

inline StarCylinder random_cylinder(Rng& rng, int dim,
                                    const std::vector<std::string>& consts,
                                    bool extended, int max_rows,
                                    int max_enull = 0) {
  Flavor f = max_enull > 0 ? Flavor::Naive
                           : (extended ? Flavor::Extended : Flavor::Positive);
  std::vector<StarTuple> rows;
  int want = pick(rng, 0, max_rows);
  for (int i = 0; i < want * 3 && static_cast<int>(rows.size()) < want; ++i) {
    auto t = random_tuple(rng, dim, consts, extended, max_enull);
    if (t) rows.push_back(*t);
  }
  return StarCylinder::make(dim, f, std::move(rows));
}

// Random query generator. Queries are produced directly in apart form
// (each relation atom uses its own fresh variables; sharing is expressed
// through equality atoms), so the variable budget is controlled exactly.
// All free variables end up in the head, in random order, which makes
// full-dimension oracle comparisons meaningful.
struct QueryGen {
  Schema schema;
  int max_n = 4;
  bool allow_forall = false;
  bool allow_negation = false;
  bool neg_eq_only = false;  // negation wraps equality atoms only
  bool apart = true;         // when false, atoms may reuse variables

  int next_var = 1;

  FormulaPtr leaf(Rng& rng) {
    int allocated = next_var - 1;
    bool can_eq = allocated >= 2;
    // Relations whose arity still fits the variable budget.
    std::vector<int> fitting;
    for (std::size_t p = 0; p < schema.relations.size(); ++p)
      if (allocated + schema.relations[p].second <= max_n)
        fitting.push_back(static_cast<int>(p));
    if (!apart && allocated >= 1 && chance(rng, 0.6)) {
      int rel = pick(rng, 0, schema.relations.size() - 1);
      std::vector<Term> args;
      for (int a = 0; a < schema.relations[rel].second; ++a)
        args.push_back(Term::variable(pick(rng, 1, allocated)));
      return Formula::atom(rel, std::move(args));
    }
    if (!fitting.empty() && (!can_eq || chance(rng, 0.7))) {
      int rel = fitting[pick(rng, 0, fitting.size() - 1)];
      std::vector<Term> args;
      for (int a = 0; a < schema.relations[rel].second; ++a)
        args.push_back(Term::variable(next_var++));
      return Formula::atom(rel, std::move(args));
    }
    if (can_eq) {
      int i = pick(rng, 1, allocated);
      int j = pick(rng, 1, allocated);
      while (j == i) j = pick(rng, 1, allocated);
      return Formula::eq(i, j);
    }
    // Budget exhausted before anything was allocated: smallest atom.
    int rel = 0;
    std::vector<Term> args;
    for (int a = 0; a < schema.relations[rel].second; ++a)
      args.push_back(Term::variable(next_var++));
    return Formula::atom(rel, std::move(args));
  }

  FormulaPtr rec(Rng& rng, int depth) {
    int r = pick(rng, 0, 99);
    if (depth <= 0 || r < 35) return leaf(rng);
    if (r < 55) return Formula::conj(rec(rng, depth - 1), rec(rng, depth - 1));
    if (r < 70) return Formula::disj(rec(rng, depth - 1), rec(rng, depth - 1));
    if (allow_negation && r < 80) {
      if (!neg_eq_only) return Formula::neg(rec(rng, depth - 1));
      int allocated = next_var - 1;
      if (allocated >= 2) {
        int i = pick(rng, 1, allocated);
        int j = pick(rng, 1, allocated);
        while (j == i) j = pick(rng, 1, allocated);
        return Formula::conj(rec(rng, depth - 1),
                             Formula::neg(Formula::eq(i, j)));
      }
      return leaf(rng);
    }
    FormulaPtr body = rec(rng, depth - 1);
    std::vector<int> fv = starcyl::free_vars(body);
    if (fv.empty()) return body;
    int v = fv[pick(rng, 0, fv.size() - 1)];
    if (allow_forall && chance(rng, 0.4)) return Formula::forall(v, body);
    return Formula::exists(v, body);
  }

  // Generates a query whose head lists every free variable.
  Query gen(Rng& rng) {
    for (;;) {
      next_var = 1;
      FormulaPtr body = rec(rng, pick(rng, 1, 3));
      std::vector<int> fv = starcyl::free_vars(body);
      if (fv.empty()) continue;
      Query q;
      q.body = body;
      q.answer_vars = fv;
      std::shuffle(q.answer_vars.begin(), q.answer_vars.end(), rng);
      q.n = starcyl::max_var(body);
      return q;
    }
  }

  // Generates until the syntactic class matches.
  Query gen_class(Rng& rng, starcyl::QueryClass want) {
    for (;;) {
      Query q = gen(rng);
      if (starcyl::classify(q) == want) return q;
    }
  }
};

inline Schema small_schema() {
  Schema s;
  s.relations = {{"R", 1}, {"S", 2}, {"T", 2}};
  return s;
}

inline starcyl::StoredDatabase db_from_string(const std::string& text) {
  std::istringstream in(text);
  return starcyl::load_database(in);
}

// Example database: F(ollows) and H(obbies).
inline starcyl::StoredDatabase example1_db() {
  return db_from_string(
      "relation F/2\n"
      "Alice, Chris\n"
      "*, Alice\n"
      "Bob, *\n"
      "Chris, Bob\n"
      "David, Bob\n"
      "relation H/2\n"
      "Alice, Movies\n"
      "Alice, Music\n"
      "Bob, Basketball\n");
}

// Explicit negative information about hobbies.
inline starcyl::StoredDatabase neginfo_db() {
  return db_from_string(
      "relation Hneg/2\n"
      "Alice, Volleyball\n"
      "Bob, * | 2!=Basketball\n"
      "Chris, *\n");
}

// Random stored database over the schema, constants drawn from `consts`.
inline std::vector<StarCylinder> random_database(
    Rng& rng, const Schema& schema, const std::vector<std::string>& consts,
    bool extended, int max_rows, int max_enull = 0) {
  std::vector<StarCylinder> db;
  for (const auto& [name, arity] : schema.relations) {
    (void)name;
    db.push_back(
        random_cylinder(rng, arity, consts, extended, max_rows, max_enull));
  }
  return db;
}

}  // namespace testutil
