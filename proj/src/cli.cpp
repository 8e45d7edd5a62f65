#include "starcyl/cli.hpp"

#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "starcyl/io.hpp"
#include "starcyl/naive.hpp"
#include "starcyl/oracle.hpp"

namespace starcyl {

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitBudget = 4;
constexpr int kExitMismatch = 5;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t a = tok.find_first_not_of(" \t");
    std::size_t b = tok.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? "" : tok.substr(a, b - a + 1));
  }
  return out;
}

bool needs_sieve(QueryClass c) { return c != QueryClass::Positive; }

void enforce_sieve_cap(const CompiledQuery& cq, int cap) {
  if (needs_sieve(cq.query_class) && cq.n > cap)
    throw budget_error(
        "query uses negation or universal quantification at dimension " +
        std::to_string(cq.n) + ", above the sieve cap of " +
        std::to_string(cap) + " (raise --max-sieve-dim to override)");
}

std::vector<std::string> answer_headers(const Query& q) {
  std::vector<std::string> h;
  for (int v : q.answer_vars) h.push_back("x" + std::to_string(v));
  return h;
}

void emit_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

struct EvalArgs {
  std::string db_path, query;
  bool show_conditions = false;
  bool json = false;
  bool certain = false;
  bool reduce = false;
  bool strict = false;
  int sieve_cap = 8;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  StoredDatabase db = load_database_file(a.db_path, {a.strict}, &warnings);
  emit_warnings(warnings, err);
  Query q = parse_query(a.query, db.schema);
  EvalOptions opts;
  opts.reduce_unions = a.reduce;
  opts.sieve_dim_cap = a.sieve_cap;

  StarCylinder answer(1, Flavor::Positive);
  QueryClass cls = classify(q);
  if (a.certain) {
    answer = certain_answer(db.schema, db.relations, q, opts);
  } else {
    CompiledQuery probe = compile(q);
    enforce_sieve_cap(probe, a.sieve_cap);
    QueryRun run = run_query(db.schema, db.relations, q, opts);
    answer = std::move(run.answer);
  }

  if (a.json) {
    nlohmann::json j;
    j["class"] = query_class_name(cls);
    j["columns"] = answer_headers(q);
    j["certain"] = a.certain;
    j["result"] = nlohmann::json::parse(to_json(answer));
    out << j.dump(2) << "\n";
  } else {
    print_table(answer, answer_headers(q), a.show_conditions, out);
    out << "(" << answer.size() << " row" << (answer.size() == 1 ? "" : "s")
        << ")\n";
  }
  return 0;
}

struct MemberArgs {
  std::string db_path, query, tuple;
  bool certain = false;
  int budget = 6;
  int sieve_cap = 8;
};

int cmd_member(const MemberArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  StoredDatabase db = load_database_file(a.db_path, {}, &warnings);
  emit_warnings(warnings, err);
  Query q = parse_query(a.query, db.schema);
  std::vector<std::string> tuple = split_csv(a.tuple);
  if (tuple.size() != q.answer_vars.size())
    throw semantic_error("tuple arity does not match the query head");
  EvalOptions opts;
  opts.sieve_dim_cap = a.sieve_cap;

  bool member = false;
  if (a.certain) {
    member = certain_membership_bruteforce(tuple, q, db.schema, db.relations,
                                           a.budget, opts);
  } else {
    CompiledQuery probe = compile(q);
    enforce_sieve_cap(probe, a.sieve_cap);
    QueryRun run = run_query(db.schema, db.relations, q, opts);
    member = cylinder_member(tuple, run.answer);
  }
  out << (member ? "yes" : "no") << "\n";
  return 0;
}

struct ContainsArgs {
  std::string left_path, right_path;
  bool rep = false;
  int budget = 6;
};

const StarCylinder& single_relation(const StoredDatabase& db,
                                    const std::string& path) {
  if (db.relations.size() != 1)
    throw semantic_error("file '" + path +
                         "' must contain exactly one relation for "
                         "containment checks");
  return db.relations[0];
}

int cmd_contains(const ContainsArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  StoredDatabase left_db = load_database_file(a.left_path, {}, &warnings);
  StoredDatabase right_db = load_database_file(a.right_path, {}, &warnings);
  emit_warnings(warnings, err);
  const StarCylinder& left = single_relation(left_db, a.left_path);
  const StarCylinder& right = single_relation(right_db, a.right_path);
  if (left.dim() != right.dim())
    throw semantic_error("relations have different arities");

  bool contained;
  if (a.rep) {
    contained = rep_containment(left, right, a.budget);
  } else {
    if (left.has_enull() || right.has_enull())
      throw semantic_error(
          "plain containment is defined for star-relations without "
          "existential nulls; use --rep");
    if (!left.has_extended_literal() && !right.has_extended_literal()) {
      contained = cyl_dominates(left, right);
    } else {
      std::set<std::string> adom;
      for (const std::string& s : left.constants()) adom.insert(s);
      for (const std::string& s : right.constants()) adom.insert(s);
      EvalContext ctx(left.dim(), std::move(adom));
      contained = sieve_containment(ctx, left, right);
    }
  }
  out << (contained ? "yes" : "no") << "\n";
  return 0;
}

struct OracleArgs {
  std::string db_path, query;
  int fresh = 0;  // extra fresh values beyond the default n+1
  int sieve_cap = 8;
};

int cmd_oracle_check(const OracleArgs& a, std::ostream& out,
                     std::ostream& err) {
  std::vector<std::string> warnings;
  StoredDatabase db = load_database_file(a.db_path, {}, &warnings);
  emit_warnings(warnings, err);
  Query q = parse_query(a.query, db.schema);
  CompiledQuery probe = compile(q);
  enforce_sieve_cap(probe, a.sieve_cap);
  EvalOptions opts;
  opts.sieve_dim_cap = a.sieve_cap;
  oracle::DiffResult r =
      oracle::differential_check(db.schema, db.relations, q, a.fresh, opts);
  if (r.ok) {
    out << "PASS: star-algebra evaluation matches the finite oracle\n";
    return 0;
  }
  out << "FAIL: " << r.detail << "\n";
  return kExitMismatch;
}

struct SieveArgs {
  int n = 0;
  std::string consts;
  int sieve_cap = 8;
};

int cmd_sieve(const SieveArgs& a, std::ostream& out) {
  if (a.n < 1) throw semantic_error("--n must be at least 1");
  if (a.n > a.sieve_cap)
    throw budget_error("sieve dimension " + std::to_string(a.n) +
                       " exceeds the cap of " + std::to_string(a.sieve_cap));
  std::vector<std::string> cs = split_csv(a.consts);
  EvalContext ctx(a.n, std::set<std::string>(cs.begin(), cs.end()));
  std::vector<std::string> headers;
  for (int i = 1; i <= a.n; ++i) headers.push_back("c" + std::to_string(i));
  print_table(ctx.sieve(), headers, true, out);
  out << "(" << ctx.sieve().size() << " rows)\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"star-cylinder query engine: first-order queries over "
               "databases with universal (and existential) nulls"};
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand(
      "eval", "evaluate a query and print the answer star-relation");
  eval_cmd->add_option("--db", ev.db_path, "star-table database file")
      ->required();
  eval_cmd->add_option("--query", ev.query, "query text")->required();
  eval_cmd->add_flag("--show-conditions", ev.show_conditions,
                     "print the condition column");
  eval_cmd->add_flag("--json", ev.json, "JSON output");
  eval_cmd->add_flag("--certain", ev.certain,
                     "certain answers over existential nulls");
  eval_cmd->add_flag("--reduce", ev.reduce,
                     "drop dominated rows after unions");
  eval_cmd->add_flag("--strict", ev.strict,
                     "fail on unsatisfiable stored rows");
  eval_cmd->add_option("--max-sieve-dim", ev.sieve_cap,
                       "dimension cap for negation / forall queries");

  MemberArgs mem;
  auto* member_cmd =
      app.add_subcommand("member", "test membership of a constant tuple");
  member_cmd->add_option("--db", mem.db_path, "star-table database file")
      ->required();
  member_cmd->add_option("--query", mem.query, "query text")->required();
  member_cmd->add_option("--tuple", mem.tuple, "comma-separated constants")
      ->required();
  member_cmd->add_flag("--certain", mem.certain,
                       "certain membership over existential nulls");
  member_cmd->add_option("--budget", mem.budget,
                         "maximum nulls for the certain search");
  member_cmd->add_option("--max-sieve-dim", mem.sieve_cap,
                         "dimension cap for negation / forall queries");

  ContainsArgs con;
  auto* contains_cmd =
      app.add_subcommand("contains", "star-relation containment");
  contains_cmd->add_option("--left", con.left_path, "left relation file")
      ->required();
  contains_cmd->add_option("--right", con.right_path, "right relation file")
      ->required();
  contains_cmd->add_flag(
      "--rep", con.rep, "Rep-containment over existential nulls (NP search)");
  contains_cmd->add_option("--budget", con.budget,
                           "maximum nulls for the Rep search");

  OracleArgs ora;
  auto* oracle_cmd = app.add_subcommand(
      "oracle-check", "compare evaluation against the brute-force oracle");
  oracle_cmd->add_option("--db", ora.db_path, "star-table database file")
      ->required();
  oracle_cmd->add_option("--query", ora.query, "query text")->required();
  oracle_cmd->add_option("--fresh", ora.fresh,
                         "extra fresh values beyond the default n+1");
  oracle_cmd->add_option("--max-sieve-dim", ora.sieve_cap,
                         "dimension cap for negation / forall queries");

  SieveArgs sv;
  auto* sieve_cmd = app.add_subcommand("sieve", "dump the sieve cylinder");
  sieve_cmd->add_option("--n", sv.n, "dimension")->required();
  sieve_cmd->add_option("--consts", sv.consts, "comma-separated constants");
  sieve_cmd->add_option("--max-sieve-dim", sv.sieve_cap, "dimension cap");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(ev, out, err);
    if (member_cmd->parsed()) return cmd_member(mem, out, err);
    if (contains_cmd->parsed()) return cmd_contains(con, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle_check(ora, out, err);
    if (sieve_cmd->parsed()) return cmd_sieve(sv, out);
    err << "error: no subcommand\n";
    return kExitParse;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const budget_error& e) {
    err << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const semantic_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSemantic;
  }
}

}  // namespace starcyl
