#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "problem.hpp"

using namespace fscli;

namespace {

const std::string kDir = PROBLEMS_DIR;

ProblemFile problem(const std::string& name) { return load_problem(kDir + "/" + name + ".json"); }

json run(const std::string& cmd, const std::string& name, Flags f = {}) {
  return run_command(cmd, problem(name), f).document();
}

ProblemError parse_failure(const std::string& text) {
  try {
    parse_problem(text, "t.json");
  } catch (const ProblemError& e) {
    return e;
  }
  FAIL("expected a parse error");
  throw;
}

}  // namespace

TEST_CASE("problem files parse") {
  auto p = problem("quasi");
  REQUIRE(p.r.has_value());
  CHECK(p.r->to_rows() == std::vector<std::vector<std::int64_t>>{{4, 0}, {1, 2}});
  CHECK(p.l->size() == 4);
  CHECK(p.options.xi.size() == 1);
  CHECK(p.options.xi[0][1] == fspec::Rational(1, 3));
  auto t = problem("tower");
  CHECK(t.tower.size() == 3);
  CHECK_FALSE(t.r.has_value());
}

TEST_CASE("syntax errors carry line and column") {
  auto e = parse_failure("{\n  \"R\": [[4]],\n  \"B\": [[0], [2]\n}\n");
  CHECK(e.line() == 4);
  CHECK(e.column() == 1);
}

TEST_CASE("semantic errors point at the offending value") {
  auto e = parse_failure("{\n  \"R\": [[4]],\n  \"B\": [[0],\n        [2.5]]\n}\n");
  CHECK(e.line() == 4);
  CHECK(e.column() == 10);
  CHECK(e.pointer() == "/B/1/0");

  auto d = parse_failure("{\"R\": [[2, 0], [0, 2]],\n \"B\": [[0, 0], [1]]}");
  CHECK(d.line() == 2);
  CHECK(d.pointer() == "/B/1");

  auto z = parse_failure("{\"R\": [[2]], \"B\": [[1], [3]]}");
  CHECK(z.pointer() == "/B");

  auto u = parse_failure("{\"R\": [[2]], \"B\": [[0], [1]],\n\"options\": {\"depht\": 3}}");
  CHECK(u.line() == 2);
  CHECK(u.pointer() == "/options/depht");

  auto q = parse_failure("{\"R\": [[2]], \"B\": [[0], [1]], \"options\": {\"xi\": [\"1/0\"]}}");
  CHECK(q.pointer() == "/options/xi/0");

  auto dup = parse_failure("{\"R\": [[2]], \"B\": [[0], [1], [0]]}");
  CHECK(dup.pointer() == "/B/2");
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("-2/4") == fspec::Rational(-1, 2));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS(parse_rational("1/"));
  CHECK_THROWS(parse_rational("a"));
  CHECK_THROWS(parse_rational("1/-2"));
}

TEST_CASE("verify reports") {
  auto jp = run("verify", "jp");
  CHECK(jp["schema"] == kReportSchema);
  CHECK(jp["verdicts"]["hadamard_triple"] == true);
  CHECK(jp["results"]["unitarity_defect"]["provenance"] == "numeric");
  CHECK(jp["results"]["expansivity"]["provenance"] == "exact");
  CHECK(jp["errors"].empty());

  auto mt = run("verify", "middle_third");
  CHECK_FALSE(mt["verdicts"].contains("hadamard_triple"));
  CHECK(mt["notes"].dump().find("pair checks only") != std::string::npos);

  auto ex = run("verify", "quasi");
  CHECK(ex["verdicts"]["hadamard_triple"] == true);
  CHECK(ex["notes"].dump().find("Z[R,B] = Z^2") != std::string::npos);
  CHECK(ex["results"]["quasi_product"]["value"]["found"] == true);
}

TEST_CASE("cycles command lists the four cycles") {
  auto r = run("cycles", "nonsimple2x2");
  const auto& cycles = r["results"]["cycles"]["value"];
  REQUIRE(cycles.size() == 4);
  std::set<std::string> pts;
  for (const auto& c : cycles) pts.insert(c["points"].dump());
  CHECK(pts == std::set<std::string>{R"([["0","0"]])", R"([["0","1"]])", R"([["1","-1"]])", R"([["1","0"]])"});
  CHECK(r["results"]["cycle_spectrum"]["value"]["integral"] == true);
}

TEST_CASE("error classes map to exit codes") {
  Flags f;
  CHECK(run_command("cycles", problem("middle_third"), f).exit_code() == kExitValidation);
  auto sp = run_command("spectrum", problem("quasi"), f);
  CHECK(sp.exit_code() == kExitComputation);
  CHECK(sp.document()["errors"][0]["kind"] == "construction-failed");
  CHECK(sp.document()["results"].contains("canonical"));

  auto bad = parse_problem(R"({"tower": [{"M": 2, "K": 5, "alpha": 1}]})", "t.json");
  auto tw = run_command("tower", bad, f);
  CHECK(tw.exit_code() == kExitPrecondition);

  auto nt = parse_problem(R"({"R": [[4]], "B": [[0], [1]], "L": [[0], [1]]})", "t.json");
  CHECK(run_command("cycles", nt, f).exit_code() == kExitPrecondition);
  CHECK(run_command("verify", nt, f).exit_code() == kExitOk);

  std::ostringstream out, err;
  CHECK(execute("verify", kDir + "/does-not-exist.json", f, out, err) == kExitValidation);
}

TEST_CASE("reports are byte-identical for identical inputs") {
  Flags f;
  f.seed = 7;
  f.depth = 2;
  std::string a = run_command("select", problem("middle_third"), f).dump();
  std::string b = run_command("select", problem("middle_third"), f).dump();
  CHECK(a == b);
  f.seed = 8;
  CHECK(run_command("select", problem("middle_third"), f).document()["results"]["random_swap"]["value"]["seed"] == 8);
  CHECK(a.find("timing") == std::string::npos);
  f.timing = true;
  CHECK(run_command("select", problem("middle_third"), f).document().contains("timing"));
}

TEST_CASE("delta table decreases") {
  Flags f;
  f.depth = 10;
  auto r = run("delta", "lebesgue", f);
  CHECK(r["verdicts"]["strictly_decreasing"] == true);
  CHECK(r["results"]["delta_by_depth"]["value"].size() == 10);
  CHECK(r["results"]["delta"]["value"]["witness"][0] == 1023);
}

TEST_CASE("attractor writes a point cloud") {
  Flags f;
  f.depth = 4;
  f.csv = "cli_test_points.csv";
  auto r = run("attractor", "quasi", f);
  CHECK(r["errors"].empty());
  std::ifstream in(*f.csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "x1,x2");
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 256);
  CHECK(r["results"]["point_cloud"]["value"]["points"] == 256);
  std::remove(f.csv->c_str());
}

TEST_CASE("tower and zeroscan commands") {
  auto t = run("tower", "tower");
  CHECK(t["verdicts"]["levels_within_bounds"] == true);
  CHECK(t["results"]["levels"]["value"].size() == 3);
  Flags f;
  f.kmax = 3;
  auto z = run("zeroscan", "quasi", f);
  CHECK(z["results"]["scan"]["value"]["certified"] == 1);
  CHECK(z["results"]["scan"]["value"]["entries"][0]["shifts_certified"] == 49);
}
