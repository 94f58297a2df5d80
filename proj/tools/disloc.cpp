// disloc: run dislocation scenarios, the builtin example suite, or print the scenario schema.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "disloc/examples.hpp"
#include "disloc/scenario.hpp"
#include "disloc/schema.hpp"

namespace {

using namespace disloc::scenario;

constexpr int kExitPass = 0, kExitFail = 1, kExitInput = 2;

void add_settings(CLI::App* cmd, Settings& s, std::string& report) {
  cmd->add_option("--quadrature-order", s.quadrature_order, "minimum simplex quadrature order")
      ->check(CLI::Range(1, disloc::geometry::QuadratureRule::kMaxOrder));
  cmd->add_option("--fd-step", s.fd_step, "finite-difference step for non-analytic fields")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance-scale", s.tolerance_scale, "multiplies the default tolerance rungs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--resolution", s.resolution, "cells per axis for region meshes and support grids")
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--report", report, "report format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--timing", s.timing, "include wall times in reports");
}

int run_file(const std::string& path, const Settings& s, const std::string& format) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "disloc: cannot open " << path << "\n";
    return kExitInput;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  try {
    const Scenario sc = Scenario::parse(buf.str(), s, stem);
    const Report rep = sc.run();
    if (format == "json")
      std::cout << report_json(rep).dump(2) << "\n";
    else
      std::cout << report_text(rep);
    return rep.passed() ? kExitPass : kExitFail;
  } catch (const InputError& e) {
    std::cerr << "disloc: " << path << ": " << e.what() << "\n";
    return kExitInput;
  }
}

int run_examples(const std::string& filter, const Settings& s, const std::string& format) {
  std::vector<const Example*> picked;
  for (const auto& ex : builtin_examples())
    if (filter.empty() || std::string(ex.id).rfind(filter, 0) == 0) picked.push_back(&ex);
  if (picked.empty()) {
    std::cerr << "disloc: no example matches '" << filter << "'; available:\n";
    for (const auto& ex : builtin_examples()) std::cerr << "  " << ex.id << "\n";
    return kExitInput;
  }
  std::vector<Report> reports;
  for (const Example* ex : picked) {
    try {
      reports.push_back(Scenario::parse(ex->json, s, ex->id).run());
    } catch (const InputError& e) {
      std::cerr << "disloc: example " << ex->id << ": " << e.what() << "\n";
      return kExitInput;
    }
  }
  bool all = true;
  for (const auto& r : reports) all &= r.passed();
  if (format == "json") {
    Json arr = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      Json j = report_json(reports[i]);
      j["topic"] = picked[i]->topic;
      arr.push_back(std::move(j));
    }
    std::cout << Json{{"schema_version", kSchemaVersion}, {"overall", all ? "pass" : "fail"}, {"examples", arr}}.dump(2)
              << "\n";
  } else {
    std::size_t w = 2;
    for (const Example* ex : picked) w = std::max(w, std::string(ex->id).size());
    std::size_t wt = 5;
    for (const Example* ex : picked) wt = std::max(wt, std::string(ex->topic).size());
    auto pad = [](std::string x, std::size_t n) { return x.append(n > x.size() ? n - x.size() : 0, ' '); };
    std::cout << pad("id", w) << "  " << pad("topic", wt) << "  verdict  residual\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
      std::cout << pad(picked[i]->id, w) << "  " << pad(picked[i]->topic, wt) << "  "
                << pad(reports[i].passed() ? "pass" : "FAIL", 7) << "  " << num(reports[i].max_residual()) << "\n";
    for (const auto& r : reports)
      if (!r.passed()) std::cout << "\n" << report_text(r);
    std::cout << (all ? "all " : "not all ") << reports.size() << " examples pass\n";
  }
  return all ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular dislocations as de Rham currents"};
  app.require_subcommand(1);

  Settings run_settings, ex_settings;
  std::string run_report = "text", ex_report = "text", path, filter;

  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("file", path, "scenario JSON")->required();
  add_settings(run, run_settings, run_report);

  auto* ex = app.add_subcommand("examples", "run the builtin example suite");
  ex->add_option("--filter", filter, "example id or id prefix");
  add_settings(ex, ex_settings, ex_report);

  auto* schema = app.add_subcommand("schema", "print the scenario schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (*run) return run_file(path, run_settings, run_report);
  if (*ex) return run_examples(filter, ex_settings, ex_report);
  if (*schema) std::cout << schema_json().dump(2) << "\n";
  return kExitPass;
}
