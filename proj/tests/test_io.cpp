#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "clonesmith/fixtures.hpp"
#include "clonesmith/io.hpp"
#include "clonesmith/verify.hpp"

using namespace clonesmith;

namespace {

std::string temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "clonesmith-io-tests";
  std::filesystem::create_directories(dir);
  return dir.string();
}

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args) {
#ifdef CLONESMITH_CLI_PATH
  const std::string cmd = std::string(CLONESMITH_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
#else
  FAIL("CLI path not configured");
  return {2, ""};
#endif
}

}  // namespace

TEST_CASE("operation files round-trip bit-exactly") {
  for (const char* name : {"m1", "M3", "f1", "f1_star"}) {
    TernaryOp op = fixtures::fixture(name);
    const std::string once = op_to_string(op);
    TernaryOp back = op_from_string(once);
    CHECK(back == op);
    CHECK(op_to_string(back) == once);
  }
}

TEST_CASE("operation file validation") {
  CHECK_THROWS_AS(op_from_string("{"), ParseError);
  CHECK_THROWS_AS(op_from_string("[1,2]"), ParseError);
  CHECK_THROWS_AS(op_from_string(R"({"size":2,"labels":["a"],"table":[0,0,0,0,0,0,0,0]})"),
                  ParseError);
  CHECK_THROWS_AS(
      op_from_string(R"({"size":2,"labels":["a","b"],"table":[0,0,0,0,0,0,0,7]})"), ParseError);
  CHECK_THROWS_AS(op_from_string(R"({"size":2,"labels":["a","b"],"table":[0,0,0]})"), Error);
}

TEST_CASE("overbar and star labels serialize as plain ASCII") {
  OrderedJson j = op_to_json(fixtures::fixture("f1_star"));
  CHECK(j["labels"].dump() == R"(["0","1","2","1b","2b","*"])");
}

TEST_CASE("fixture catalog") {
  auto names = fixtures::fixture_names();
  CHECK(names.size() == 52);  // 12 + alias + 12 + 26 + f1_star
  for (const char* required :
       {"m1", "m2", "d1", "d2", "d3", "m3", "M1", "M2", "M3", "f1", "f2", "g6_1b_1b", "f1_star"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  CHECK(fixtures::fixture("d1") == fixtures::fixture("m2"));
  CHECK_THROWS_AS(fixtures::fixture("nope"), Error);
  CHECK(fixtures::five_elt_ops().size() == 26);
  CHECK(fixtures::three_elt_ops().size() == 12);
  CHECK(fixtures::four_elt_ops().size() == 12);
}

TEST_CASE("fixture files export and reload byte-identically") {
  const std::string dir = temp_dir() + "/fixtures";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const auto& name : fixtures::fixture_names())
    write_op_file(dir + "/" + name + ".json", fixtures::fixture(name));
  for (const auto& name : fixtures::fixture_names()) {
    TernaryOp back = read_op_file(dir + "/" + name + ".json");
    CHECK(back == fixtures::fixture(name));
    CHECK(read_file(dir + "/" + name + ".json") == op_to_string(back));
  }
}

TEST_CASE("file-backed fixture lookup reports missing fixtures") {
  const std::string dir = temp_dir() + "/missing";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  verify::FixtureLookup lookup = verify::directory_fixtures(dir);
  CHECK_THROWS_WITH(lookup("f1"), Catch::Matchers::ContainsSubstring("fixture missing"));
}

TEST_CASE("atomic writes leave complete files behind") {
  const std::string path = temp_dir() + "/atomic.json";
  atomic_write_file(path, "payload\n");
  CHECK(read_file(path) == "payload\n");
  CHECK(!std::filesystem::exists(path + ".tmp"));
}

TEST_CASE("opset and report JSON shapes") {
  OpSet c = ternary_closure(fixtures::fixture("m2"));
  OrderedJson j = opset_to_json(c);
  CHECK(j["universe"]["size"] == 3);
  CHECK(j["members"].size() == 6);
  CHECK(j["closed"] == true);

  MinimalityReport report = minimality_check(fixtures::fixture("m1"));
  OrderedJson rj = minimality_report_to_json(report);
  CHECK(rj["minimal"] == true);
  CHECK(rj["majority_count"] == 1);
  CHECK(rj["counterexample"].is_null());
}

TEST_CASE("cli closure and minimal commands") {
  CliResult closure = run_cli("closure --fixture f1");
  CHECK(closure.exit_code == 0);
  CHECK(closure.output == "members: 29, majority: 26\n");

  CliResult minimal = run_cli("minimal --fixture f1");
  CHECK(minimal.exit_code == 0);

  CliResult usage = run_cli("minimal --op /nonexistent.json");
  CHECK(usage.exit_code == 2);

  CliResult unknown = run_cli("closure --fixture nope");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("cli rejects non-majority minimality queries") {
  const std::string path = temp_dir() + "/proj.json";
  write_op_file(path, projection(Universe(3), 1));
  CliResult res = run_cli("minimal --op " + path);
  CHECK(res.exit_code == 2);
}

TEST_CASE("cli star, restrict and term commands") {
  const std::string dir = temp_dir();
  CliResult star = run_cli("star --fixture f1 --i 1 --out " + dir + "/f1s.json");
  CHECK(star.exit_code == 0);
  CHECK(read_op_file(dir + "/f1s.json") == fixtures::fixture("f1_star"));

  CliResult restricted = run_cli("restrict --fixture f1 --subset 0,1,1b --out " + dir + "/r.json");
  CHECK(restricted.exit_code == 0);
  CHECK(read_op_file(dir + "/r.json").size() == 3);

  CliResult bad_subset = run_cli("restrict --fixture f1 --subset 0,1b,2b");
  CHECK(bad_subset.exit_code == 2);

  CliResult evaluated =
      run_cli("term-eval --fixture f1 --term d(x1,x2,d(x2,x1,x3)) --out " + dir + "/g.json");
  CHECK(evaluated.exit_code == 0);
  CHECK(read_op_file(dir + "/g.json") == fixtures::fixture("g1_1_1b"));

  CliResult shift = run_cli("term-shift --term d(x2,x3,x1) --format json");
  CHECK(shift.exit_code == 0);
  CHECK(shift.output.find("s1") != std::string::npos);

  CliResult bad_term = run_cli("term-eval --fixture f1 --term d(x1,x2)");
  CHECK(bad_term.exit_code == 2);
}

TEST_CASE("cli relpairs command") {
  CliResult rel = run_cli("relpairs --fixture f1 --seed 0,0 --seed 1,1b --seed 2,2b");
  CHECK(rel.exit_code == 0);
  CHECK(rel.output == "pairs: (0,0) (1,1) (1,1b) (2,2) (2,2b)\n");
}

TEST_CASE("cli search smoke") {
  const std::string catalog = temp_dir() + "/n3.jsonl";
  CliResult res = run_cli("search --n 3 --catalog " + catalog + " --format json");
  CHECK(res.exit_code == 0);
  CHECK(std::filesystem::exists(catalog));
  OrderedJson summary = OrderedJson::parse(res.output);
  CHECK(summary["scanned"] == "729");
  CHECK(summary["classes"] == 4);
}

TEST_CASE("cli fixtures export") {
  const std::string dir = temp_dir() + "/exported";
  std::filesystem::remove_all(dir);
  CliResult res = run_cli("fixtures export --dir " + dir);
  CHECK(res.exit_code == 0);
  CHECK(std::filesystem::exists(dir + "/f1.json"));
  CHECK(read_op_file(dir + "/f1.json") == fixtures::fixture("f1"));
}

TEST_CASE("cli honors the closure bound environment variable") {
  CliResult res = run_cli("closure --fixture f1 --closure-bound 10");
  CHECK(res.exit_code == 2);  // bound exceeded surfaces as a domain error
#ifdef CLONESMITH_CLI_PATH
  const std::string cmd =
      std::string("CLONESMITH_CLOSURE_BOUND=10 ") + CLONESMITH_CLI_PATH + " closure --fixture f1 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[256];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  CHECK(WEXITSTATUS(pclose(pipe)) == 2);
  CHECK(out.find("bound") != std::string::npos);
#endif
}
