#include "starcyl/naive.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "starcyl/oracle.hpp"

namespace starcyl {

StarCylinder apply_hom(const PwHom& h, const StarCylinder& c) {
  std::vector<StarTuple> out;
  bool nulls_left = false;
  for (const StarTuple& t : c.tuples()) {
    std::vector<Value> entries;
    entries.reserve(t.entries().size());
    for (const Value& v : t.entries()) {
      Value w = h.apply(v);
      nulls_left |= w.is_enull();
      entries.push_back(std::move(w));
    }
    if (auto nt = StarTuple::normalize(std::move(entries), t.cond()))
      out.push_back(std::move(*nt));
  }
  Flavor f = c.flavor();
  if (f == Flavor::Naive && !nulls_left) f = Flavor::Positive;
  return StarCylinder::make(c.dim(), f, std::move(out));
}

StarCylinder downarrow(const StarCylinder& c) {
  std::vector<StarTuple> out;
  for (const StarTuple& t : c.tuples())
    if (!t.has_enull()) out.push_back(t);
  Flavor f = c.flavor() == Flavor::Naive ? Flavor::Positive : c.flavor();
  return StarCylinder::make(c.dim(), f, std::move(out));
}

StarCylinder certain_answer(const Schema& schema,
                            const std::vector<StarCylinder>& stored,
                            const Query& q, const EvalOptions& opts) {
  QueryClass cls = classify(q);
  if (cls != QueryClass::Positive && cls != QueryClass::PositiveWithForall)
    throw semantic_error(
        "certain answers via naive evaluation require a positive query "
        "(use certain membership for inequality atoms)");
  QueryRun run = run_query(schema, stored, q, opts);
  StarCylinder grounded = downarrow(run.full);
  return project_answer(grounded, run.compiled.answer_arity());
}

std::vector<PwHom> enumerate_homs(const std::vector<int>& null_ids,
                                  const std::vector<Value>& targets) {
  std::vector<PwHom> out;
  PwHom h;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == null_ids.size()) {
      out.push_back(h);
      return;
    }
    for (const Value& v : targets) {
      h.mapping[null_ids[i]] = v;
      rec(i + 1);
    }
    h.mapping.erase(null_ids[i]);
  };
  rec(0);
  return out;
}

namespace {

std::vector<int> database_nulls(const std::vector<StarCylinder>& stored) {
  std::set<int> ids;
  for (const StarCylinder& c : stored)
    for (int id : c.enull_ids()) ids.insert(id);
  return {ids.begin(), ids.end()};
}

}  // namespace

bool certain_membership_bruteforce(const std::vector<std::string>& tuple,
                                   const Query& q, const Schema& schema,
                                   const std::vector<StarCylinder>& stored,
                                   int budget, const EvalOptions& opts) {
  QueryClass cls = classify(q);
  if (cls == QueryClass::FullFO)
    throw semantic_error(
        "certain membership supports negation on equality atoms only");
  std::vector<int> nulls = database_nulls(stored);
  if (static_cast<int>(nulls.size()) > budget)
    throw budget_error("database has " + std::to_string(nulls.size()) +
                       " nulls, above the budget of " + std::to_string(budget));

  std::set<std::string> adom;
  for (const StarCylinder& c : stored)
    for (const std::string& s : c.constants()) adom.insert(s);
  for (const std::string& s : tuple) adom.insert(s);
  std::function<void(const FormulaPtr&)> consts = [&](const FormulaPtr& f) {
    if (f->kind == Formula::Kind::EqConst) adom.insert(f->sym);
    if (f->kind == Formula::Kind::Atom)
      for (const Term& t : f->args)
        if (!t.is_var) adom.insert(t.sym);
    if (f->left) consts(f->left);
    if (f->right) consts(f->right);
  };
  consts(q.body);

  std::vector<Value> targets;
  for (const std::string& s : adom) targets.push_back(Value::constant(s));
  for (const std::string& f :
       oracle::fresh_values(adom, static_cast<int>(nulls.size())))
    targets.push_back(Value::constant(f));

  for (const PwHom& h : enumerate_homs(nulls, targets)) {
    std::vector<StarCylinder> world;
    world.reserve(stored.size());
    for (const StarCylinder& c : stored) world.push_back(apply_hom(h, c));
    QueryRun run = run_query(schema, world, q, opts);
    if (!cylinder_member(tuple, run.answer)) return false;
  }
  return true;
}

bool rep_containment(const StarCylinder& c, const StarCylinder& d,
                     int budget) {
  if (c.flavor() == Flavor::Extended || d.flavor() == Flavor::Extended)
    throw semantic_error("rep containment is defined for naive cylinders");
  if (c.dim() != d.dim())
    throw semantic_error("rep containment requires equal dimensions");
  std::vector<int> nulls = d.enull_ids();
  if (static_cast<int>(nulls.size()) > budget)
    throw budget_error("cylinder has " + std::to_string(nulls.size()) +
                       " nulls, above the budget of " + std::to_string(budget));

  // Mapping targets: every constant or null of either side. Fresh values
  // are subsumed by keeping a null generic.
  std::vector<Value> targets;
  for (const std::string& s : c.constants())
    targets.push_back(Value::constant(s));
  for (const std::string& s : d.constants())
    targets.push_back(Value::constant(s));
  for (int id : c.enull_ids()) targets.push_back(Value::enull(id));
  for (int id : nulls) targets.push_back(Value::enull(id));
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  for (const PwHom& h : enumerate_homs(nulls, targets))
    if (cyl_dominates(apply_hom(h, d), c)) return true;
  return false;
}

namespace {

bool expr_is_positive(const ScaPtr& e) {
  if (e->kind == ScaExpr::Kind::Complement) return false;
  if (e->left && !expr_is_positive(e->left)) return false;
  if (e->right && !expr_is_positive(e->right)) return false;
  return true;
}

}  // namespace

bool view_containment_bruteforce(const ScaPtr& e1,
                                 const std::vector<StarCylinder>& db1,
                                 const ScaPtr& e2,
                                 const std::vector<StarCylinder>& db2, int n,
                                 int budget, const EvalOptions& opts) {
  if (!expr_is_positive(e1) || !expr_is_positive(e2))
    throw semantic_error("view containment requires positive expressions");

  std::vector<int> nulls1 = database_nulls(db1);
  std::vector<int> nulls2 = database_nulls(db2);
  if (static_cast<int>(nulls1.size() + nulls2.size()) > budget)
    throw budget_error("databases have " +
                       std::to_string(nulls1.size() + nulls2.size()) +
                       " nulls, above the budget of " + std::to_string(budget));

  std::set<std::string> adom;
  for (const StarCylinder& c : db1)
    for (const std::string& s : c.constants()) adom.insert(s);
  for (const StarCylinder& c : db2)
    for (const std::string& s : c.constants()) adom.insert(s);
  std::vector<std::string> fresh = oracle::fresh_values(
      adom, static_cast<int>(std::max(nulls1.size(), nulls2.size())));

  std::set<std::string> full_adom = adom;
  for (const std::string& f : fresh) full_adom.insert(f);
  EvalContext ctx(n, full_adom);

  std::vector<Value> targets;
  for (const std::string& s : adom) targets.push_back(Value::constant(s));
  for (const std::string& f : fresh) targets.push_back(Value::constant(f));

  auto worlds = [&](const std::vector<StarCylinder>& db,
                    const std::vector<int>& nulls) {
    std::vector<std::vector<StarCylinder>> out;
    for (const PwHom& h : enumerate_homs(nulls, targets)) {
      std::vector<StarCylinder> w;
      w.reserve(db.size());
      for (const StarCylinder& c : db) w.push_back(apply_hom(h, c));
      out.push_back(std::move(w));
    }
    return out;
  };

  std::vector<StarCylinder> values2;
  for (const auto& w : worlds(db2, nulls2))
    values2.push_back(evaluate(e2, w, ctx, opts));

  for (const auto& w : worlds(db1, nulls1)) {
    StarCylinder v1 = evaluate(e1, w, ctx, opts);
    bool matched = false;
    for (const StarCylinder& v2 : values2)
      if (sieve_equal(ctx, v1, v2)) {
        matched = true;
        break;
      }
    if (!matched) return false;
  }
  return true;
}

}  // namespace starcyl
