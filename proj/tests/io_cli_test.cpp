#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "starcyl/cli.hpp"
#include "starcyl/io.hpp"
#include "testutil.hpp"

using namespace starcyl;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = ::testing::TempDir() + "starcyl_" + std::to_string(::getpid()) +
           "_" + std::to_string(counter++) + ".sdb";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kExample1 =
    "relation F/2\n"
    "Alice, Chris\n"
    "*, Alice\n"
    "Bob, *\n"
    "Chris, Bob\n"
    "David, Bob\n"
    "relation H/2\n"
    "Alice, Movies\n"
    "Alice, Music\n"
    "Bob, Basketball\n";

const char* kQueryOne =
    "x4 . exists x2 exists x3 forall x1 (F(x1,x2) & H(x3,x4) & x2 ~ x3)";

}  // namespace

TEST(Load, ParsesValuesConditionsAndFlavors) {
  StoredDatabase db = testutil::db_from_string(
      "relation R/3\n"
      "a, *, ?2 | 1=2\n"
      "relation E/2\n"
      "Bob, * | 2!=Basketball\n");
  EXPECT_EQ(db.relations[0].flavor(), Flavor::Naive);
  EXPECT_EQ(db.relations[0].tuples()[0].to_string(), "(a,a,?2,{1=2})");
  EXPECT_EQ(db.relations[1].flavor(), Flavor::Extended);
  EXPECT_EQ(db.relations[1].tuples()[0].to_string(),
            "(Bob,*,{2!=Basketball})");
}

TEST(Load, Errors) {
  EXPECT_THROW(testutil::db_from_string("a, b\n"), parse_error);
  EXPECT_THROW(testutil::db_from_string("relation R/2\na\n"), parse_error);
  EXPECT_THROW(testutil::db_from_string("relation R/2\na, b | 3=1\n"),
               parse_error);
  EXPECT_THROW(testutil::db_from_string("relation R/0\n"), parse_error);
  EXPECT_THROW(
      testutil::db_from_string("relation R/2\n?1, * | 2!=a\n"),
      semantic_error);  // naive and extended conditions never co-occur
}

TEST(Load, UnsatisfiableRows) {
  std::istringstream in("relation R/2\na, b | 1=2\nc, d\n");
  std::vector<std::string> warnings;
  StoredDatabase db = load_database(in, {}, &warnings);
  EXPECT_EQ(db.relations[0].size(), 1u);
  ASSERT_EQ(warnings.size(), 1u);

  std::istringstream strict_in("relation R/2\na, b | 1=2\n");
  EXPECT_THROW(load_database(strict_in, {true}), semantic_error);
}

TEST(SaveLoad, RoundTripsCanonicalFiles) {
  testutil::Rng rng(109);
  for (int i = 0; i < 50; ++i) {
    StoredDatabase db;
    db.schema.relations = {{"R", 2}, {"S", 3}};
    db.relations.push_back(
        testutil::random_cylinder(rng, 2, {"a", "b"}, true, 4));
    db.relations.push_back(
        testutil::random_cylinder(rng, 3, {"a", "b"}, false, 4));
    std::string text = save_database_string(db);
    StoredDatabase again = testutil::db_from_string(text);
    EXPECT_EQ(save_database_string(again), text);
    EXPECT_EQ(again.relations[0], db.relations[0]);
    EXPECT_EQ(again.relations[1], db.relations[1]);
  }
}

TEST(Expand, MatchesStoredArity) {
  StoredDatabase db = testutil::example1_db();
  auto expanded = expand(db, 4);
  EXPECT_EQ(expanded[0].dim(), 4);
  EXPECT_EQ(expanded[0].size(), db.relations[0].size());
  EXPECT_THROW(expand(db, 1), semantic_error);
}

TEST(Cli, EvalExampleOne) {
  TempFile f(kExample1);
  auto r = cli({"eval", "--db", f.path, "--query", kQueryOne});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Movies"), std::string::npos);
  EXPECT_NE(r.out.find("Music"), std::string::npos);
  EXPECT_NE(r.out.find("(2 rows)"), std::string::npos);
}

TEST(Cli, EvalJsonOutput) {
  TempFile f(kExample1);
  auto r = cli({"eval", "--db", f.path, "--query", kQueryOne, "--json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"class\": \"positive-with-forall\""),
            std::string::npos);
  EXPECT_NE(r.out.find("\"flavor\": \"positive\""), std::string::npos);
  EXPECT_NE(r.out.find("\"Movies\""), std::string::npos);
}

TEST(Cli, MemberQueries) {
  TempFile f(kExample1);
  auto yes = cli({"member", "--db", f.path, "--query", "x1, x2 . F(x1,x2)",
                  "--tuple", "Bob,Alice"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out, "yes\n");
  auto no = cli({"member", "--db", f.path, "--query", "x1, x2 . F(x1,x2)",
                 "--tuple", "Alice,Bob"});
  EXPECT_EQ(no.out, "no\n");
}

TEST(Cli, EvalCertainOverNaiveDb) {
  TempFile f(
      "relation F/2\n"
      "Alice, Chris\n"
      "*, Alice\n"
      "Bob, *\n"
      "?1, Chris\n");
  auto plain = cli({"eval", "--db", f.path, "--query", "x1, x2 . F(x1,x2)"});
  EXPECT_EQ(plain.code, 0);
  EXPECT_NE(plain.out.find("?1"), std::string::npos);
  auto certain =
      cli({"eval", "--db", f.path, "--query", "x2 . F(Bob,x2)", "--certain"});
  EXPECT_EQ(certain.code, 0);
  EXPECT_NE(certain.out.find("*"), std::string::npos);
  EXPECT_NE(certain.out.find("(1 row)"), std::string::npos);
  auto rejected =
      cli({"eval", "--db", f.path, "--query", "x1 . !F(x1,x1)", "--certain"});
  EXPECT_EQ(rejected.code, 3);
}

TEST(Cli, MemberCertainOverNaiveDb) {
  TempFile f(
      "relation H/2\n"
      "Alice, ?1\n");
  auto yes = cli({"member", "--db", f.path, "--query",
                  "x1 . exists x2 H(x1,x2)", "--tuple", "Alice", "--certain"});
  EXPECT_EQ(yes.out, "yes\n");
  auto no = cli({"member", "--db", f.path, "--query", "x1, x2 . H(x1,x2)",
                 "--tuple", "Alice,Chris", "--certain"});
  EXPECT_EQ(no.out, "no\n");
}

TEST(Cli, Contains) {
  TempFile left("relation R/2\na, b\n");
  TempFile right("relation R/2\na, *\n");
  auto yes = cli({"contains", "--left", left.path, "--right", right.path});
  EXPECT_EQ(yes.out, "yes\n");
  auto no = cli({"contains", "--left", right.path, "--right", left.path});
  EXPECT_EQ(no.out, "no\n");

  TempFile nleft("relation R/2\na, b\n");
  TempFile nright("relation R/2\n?1, b\n");
  auto rep = cli({"contains", "--left", nleft.path, "--right", nright.path,
                  "--rep"});
  EXPECT_EQ(rep.out, "yes\n");

  // Conditioned relations route through the sieve.
  TempFile eleft("relation R/2\nBob, * | 2!=Basketball\n");
  TempFile eright("relation R/2\nBob, *\n");
  auto esub = cli({"contains", "--left", eleft.path, "--right", eright.path});
  EXPECT_EQ(esub.out, "yes\n");
  auto esup = cli({"contains", "--left", eright.path, "--right", eleft.path});
  EXPECT_EQ(esup.out, "no\n");
}

TEST(Cli, OracleCheck) {
  TempFile f(kExample1);
  auto r = cli({"oracle-check", "--db", f.path, "--query", kQueryOne});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, SieveDump) {
  auto r = cli({"sieve", "--n", "2", "--consts", "a"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(5 rows)"), std::string::npos);
  auto too_big = cli({"sieve", "--n", "9"});
  EXPECT_EQ(too_big.code, 4);
}

TEST(Cli, ExitCodes) {
  TempFile f(kExample1);
  // 2: query syntax error.
  EXPECT_EQ(cli({"eval", "--db", f.path, "--query", "x1 ."}).code, 2);
  // 3: semantic error (unknown relation is reported at parse; use an
  // arity clash in a tuple instead).
  EXPECT_EQ(cli({"member", "--db", f.path, "--query", "x1, x2 . F(x1,x2)",
                 "--tuple", "Bob"})
                .code,
            3);
  // 4: budget exceeded.
  TempFile nulls("relation R/1\n?1\n?2\n?3\n");
  EXPECT_EQ(cli({"member", "--db", nulls.path, "--query", "x1 . R(x1)",
                 "--tuple", "a", "--certain", "--budget", "2"})
                .code,
            4);
  // 2: missing required option.
  EXPECT_EQ(cli({"eval", "--query", "x1 . R(x1)"}).code, 2);
  // 3: unreadable file.
  EXPECT_EQ(cli({"eval", "--db", "/nonexistent.sdb", "--query", "x1 . F(x1,x2)"})
                .code,
            3);
}

TEST(Cli, InequalityQueryOverNaiveDbNeedsCertain) {
  TempFile f(
      "relation R/1\n"
      "?1\n");
  // Naive evaluation cannot combine nulls with inequality machinery.
  auto plain = cli({"eval", "--db", f.path, "--query",
                    "x1 . exists x2 (R(x1) & R(x2) & !(x1 ~ x2))"});
  EXPECT_EQ(plain.code, 3);
  // The world-enumerating route handles it.
  auto certain = cli({"member", "--db", f.path, "--query",
                      "x1 . exists x2 (R(x1) & R(x2) & !(x1 ~ x2))",
                      "--tuple", "a", "--certain"});
  EXPECT_EQ(certain.code, 0);
  EXPECT_EQ(certain.out, "no\n");
}

TEST(Cli, StrictFlagRejectsUnsatRows) {
  TempFile f("relation R/2\na, b | 1=2\n");
  auto lax = cli({"eval", "--db", f.path, "--query", "x1, x2 . R(x1,x2)"});
  EXPECT_EQ(lax.code, 0);
  EXPECT_NE(lax.err.find("unsatisfiable"), std::string::npos);
  auto strict = cli({"eval", "--db", f.path, "--query", "x1, x2 . R(x1,x2)",
                     "--strict"});
  EXPECT_EQ(strict.code, 3);
}

TEST(Cli, ShowConditions) {
  TempFile f(
      "relation Hneg/2\n"
      "Alice, Volleyball\n"
      "Bob, * | 2!=Basketball\n"
      "Chris, *\n");
  auto r = cli({"eval", "--db", f.path, "--query", "x1, x2 . Hneg(x1,x2)",
                "--show-conditions"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("2!=Basketball"), std::string::npos);
}
