#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "disloc/examples.hpp"
#include "disloc/schema.hpp"

using namespace disloc::scenario;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = R"({
  "patch": {"dim": 2, "cube": 1},
  "forms": {"step": {"builtin": "step_interface", "a": 2}},
  "currents": {"T": {"type": "form", "form": "step"}},
  "checks": [CHECK]
})";

std::string tiny(const std::string& check) {
  std::string s = kTiny;
  s.replace(s.find("CHECK"), 5, check);
  return s;
}

}  // namespace

TEST_CASE("syntax errors carry line and column") {
  const std::string text = "{\n  \"patch\": {\"dim\": 2,,}\n}";
  CHECK_THROWS_WITH(Scenario::parse(text, {}), ContainsSubstring("line 2, column"));
}

TEST_CASE("input errors are raised while loading") {
  const Settings s;
  CHECK_THROWS_WITH(Scenario::parse(tiny(R"({"op": "frobnicate", "current": "T"})"), s),
                    ContainsSubstring("frobnicate"));
  CHECK_THROWS_WITH(Scenario::parse(tiny(R"({"op": "closed", "current": "T", "colour": 1})"), s),
                    ContainsSubstring("colour"));
  CHECK_THROWS_WITH(Scenario::parse(tiny(R"({"op": "closed", "current": "S"})"), s), ContainsSubstring("known: T"));
  // a 1-current compared against a 0-current
  CHECK_THROWS_AS(Scenario::parse(R"({
    "patch": {"dim": 2, "cube": 1},
    "forms": {"step": {"builtin": "step_interface", "a": 2}},
    "chains": {"L": {"builtin": "step_interface_line"}},
    "currents": {"T": {"type": "form", "form": "step"}, "L": {"type": "chain", "chain": "L"}},
    "checks": [{"op": "boundary_equals", "current": "T", "expected": "L"}]
  })",
                                  s),
                  InputError);
  Settings bad;
  bad.quadrature_order = 0;
  CHECK_THROWS_AS(Scenario::parse(tiny(R"({"op": "closed", "current": "T"})"), bad), InputError);
  CHECK_THROWS_WITH(Scenario::parse(R"({"patch": {"dim": 2, "cube": 1}, "checks": []})", s),
                    ContainsSubstring("non-empty"));
}

TEST_CASE("expected violations pass and unmet claims fail") {
  const Settings s;
  const Report closed = Scenario::parse(tiny(R"({"op": "closed", "current": "T"})"), s).run();
  CHECK_FALSE(closed.passed());
  const Report violated =
      Scenario::parse(tiny(R"({"op": "closed", "current": "T", "expect": "violated"})"), s).run();
  CHECK(violated.passed());
}

TEST_CASE("tolerance scale applies to default rungs only") {
  Settings s;
  s.tolerance_scale = 10;
  const Report a = Scenario::parse(tiny(R"({"op": "closed", "current": "T"})"), s).run();
  CHECK(a.checks[0].tolerance == Catch::Approx(1e-8));
  CHECK(a.checks[0].rung == "zero_threshold");
  const Report b = Scenario::parse(tiny(R"({"op": "closed", "current": "T", "tolerance": 0.5})"), s).run();
  CHECK(b.checks[0].tolerance == 0.5);
  CHECK(b.checks[0].rung == "declared");
}

TEST_CASE("reports are deterministic and text matches json numbers") {
  const auto& ex = builtin_examples().front();
  const Settings s;
  const Report r1 = Scenario::parse(ex.json, s, ex.id).run();
  const Report r2 = Scenario::parse(ex.json, s, ex.id).run();
  CHECK(report_json(r1).dump(2) == report_json(r2).dump(2));
  CHECK(report_json(r1)["schema_version"] == 1);
  CHECK_FALSE(report_json(r1)["checks"][0].contains("wall_ms"));
  const std::string text = report_text(r1);
  for (const auto& c : report_json(r1)["checks"]) CHECK(text.find("residual=" + c["residual"].dump()) != std::string::npos);
}

TEST_CASE("every builtin example passes") {
  for (const auto& ex : builtin_examples()) {
    INFO(ex.id);
    const Report r = Scenario::parse(ex.json, {}, ex.id).run();
    for (const auto& c : r.checks) {
      INFO(c.index << " " << c.op << " " << c.message << " residual " << c.residual);
      CHECK(c.verdict == "pass");
    }
  }
}

TEST_CASE("every current type and check op is documented and exercised") {
  std::string corpus;
  for (const auto& ex : builtin_examples()) corpus += ex.json;
  for (const auto& f : std::filesystem::directory_iterator(DISLOC_SCENARIO_DIR)) corpus += slurp(f.path());
  const std::string schema = schema_json().dump();
  for (const auto& t : current_types()) {
    INFO(t);
    CHECK(schema.find("\"" + t + "\"") != std::string::npos);
    CHECK(corpus.find("\"type\": \"" + t + "\"") != std::string::npos);
  }
  for (const auto& op : check_ops()) {
    INFO(op);
    CHECK(schema.find("\"" + op + "\"") != std::string::npos);
    CHECK(corpus.find("\"op\": \"" + op + "\"") != std::string::npos);
  }
}
