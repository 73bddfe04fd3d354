#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "dnf/errors.hpp"
#include "dnf/model.hpp"
#include "dnf/results.hpp"
#include "dnf/scenario.hpp"

using namespace dnf;
namespace fs = std::filesystem;

namespace {

std::string bundled() { return std::string(bundled_scenario("shadowing")); }

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "t.yaml");
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dnf_tests_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("bundled shadowing scenario loads") {
  const auto sc = parse_scenario(bundled());
  CHECK(sc.model.fields.size() == 2);
  CHECK(sc.model.memories.size() == 1);
  CHECK(sc.model.edges.size() == 2);
  CHECK(sc.model.gated_fields == std::set<std::string>{"planning"});
  REQUIRE(sc.schedule.size() == 12);
  CHECK(sc.schedule.front().label == "BL");
  CHECK(sc.schedule[1].label == "S1");
  CHECK(sc.schedule[10].label == "S10");
  CHECK(sc.schedule.back().label == "WO");
  CHECK(sc.run.dt == 0.1);
  REQUIRE(sc.run.oscillator);
  CHECK(sc.run.oscillator->mode == TargetMode::plateau_constant);
  CHECK(bundled_scenario("nope").empty());
}

TEST_CASE("bundled text matches the scenario file on disk") {
  CHECK(parse_scenario(bundled()) == load_scenario(fs::path(DNF_SCENARIO_DIR) / "shadowing.yaml"));
}

TEST_CASE("dump and parse round trip") {
  const auto sc = parse_scenario(bundled());
  const auto text = dump_scenario(sc);
  CHECK(parse_scenario(text) == sc);
  CHECK(dump_scenario(parse_scenario(text)) == text);
}

TEST_CASE("scenario errors carry the origin and line") {
  const std::regex located(R"(^t\.yaml:\d+: .+)");

  auto msg = error_of(replace_once(bundled(), "tau_decay: 60", "tau_decay: 5"));
  CHECK(std::regex_search(msg, located));
  CHECK(msg.find("tau_decay") != std::string::npos);

  msg = error_of(replace_once(bundled(), "target: planning, strength: 1.2", "target: speech, strength: 1.2"));
  CHECK(std::regex_search(msg, located));
  CHECK(msg.find("speech") != std::string::npos);

  msg = error_of(replace_once(bundled(), "tau: 10\n", "tau: 10\n    colour: blue\n"));
  CHECK(msg.find("unknown key 'colour'") != std::string::npos);

  msg = error_of(replace_once(bundled(), "tau: 10\n", "tau: ten\n"));
  CHECK(msg.find("must be a number") != std::string::npos);

  msg = error_of(replace_once(bundled(), "schema_version: 1", "schema_version: 7"));
  CHECK(msg.find("schema_version") != std::string::npos);

  msg = error_of(replace_once(bundled(), "inputs: [response]}", "inputs: [respnse]}"));
  CHECK(msg.find("respnse") != std::string::npos);

  msg = error_of("fields: [");
  CHECK(msg.rfind("t.yaml:", 0) == 0);

  // Line numbers point at the offending node.
  const std::string text = replace_once(bundled(), "tau: 5\n", "tau: -5\n");
  msg = error_of(text);
  const auto line = std::count(text.begin(), text.begin() + static_cast<long>(text.find("tau: -5")), '\n') + 1;
  CHECK(msg.rfind("t.yaml:" + std::to_string(line) + ":", 0) == 0);
}

TEST_CASE("missing scenario file is a scenario error") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.yaml"), ScenarioError);
}

TEST_CASE("format_value") {
  CHECK(format_value(3.0) == "3.000000000");
  CHECK(format_value(-0.25) == "-0.250000000");
  CHECK(format_value(-1e-12) == "0.000000000");
  CHECK(format_value(std::optional<double>{}) == "NA");
}

TEST_CASE("demo results: metrics table and files") {
  const auto sc = parse_scenario(bundled());
  const Model model(sc.model, sc.run.convolution);
  const auto ex = run_experiment(model, sc.schedule, sc.run);
  const auto bundle = make_bundle(ex);
  const auto table = metrics_table(bundle);

  std::istringstream in(table);
  std::string line;
  std::getline(in, line);
  CHECK(line == "trial_label,peak_position,threshold_onset,shift_from_baseline");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 12);
  CHECK(table.find("\nBL,3.000000000,") != std::string::npos);

  const auto dir = scratch("results");
  const auto files = write_results(bundle, dir);
  CHECK(files.size() == 13);  // metrics plus one trajectory per trial
  CHECK(slurp(dir / "metrics.csv") == table);
  CHECK(fs::exists(dir / "trajectory_00_BL.csv"));
  CHECK(fs::exists(dir / "trajectory_11_WO.csv"));
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().filename().string().rfind("heatmap", 0) != 0);

  // Same inputs, same bytes.
  const auto again = scratch("results_again");
  write_results(make_bundle(run_experiment(model, sc.schedule, sc.run)), again);
  for (const auto& f : files) CHECK(slurp(f) == slurp(again / f.filename()));
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("heatmaps are written when history is recorded") {
  auto sc = parse_scenario(bundled());
  sc.schedule.resize(1);
  sc.run.record_history = true;
  const Model model(sc.model);
  const auto dir = scratch("heatmaps");
  write_results(make_bundle(run_experiment(model, sc.schedule, sc.run)), dir);
  for (const char* layer : {"memory", "perception", "planning"}) {
    const auto p = dir / (std::string("heatmap_00_BL_") + layer + ".txt");
    REQUIRE(fs::exists(p));
    const auto text = slurp(p);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2001);
    const auto first = text.substr(0, text.find('\n'));
    CHECK(std::count(first.begin(), first.end(), ' ') == 400);
  }
  fs::remove_all(dir);
}

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DNFSIM_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  const auto good = fs::path(DNF_SCENARIO_DIR) / "shadowing.yaml";
  CHECK(run_cli("validate \"" + good.string() + "\"") == 0);

  const auto bad = dir / "bad.yaml";
  std::ofstream(bad) << replace_once(bundled(), "tau_decay: 60", "tau_decay: 5");
  CHECK(run_cli("validate \"" + bad.string() + "\"") == 1);
  CHECK(run_cli("run \"" + bad.string() + "\" --out \"" + (dir / "o").string() + "\"") == 1);
  CHECK(run_cli("validate /nonexistent.yaml") == 1);

  CHECK(run_cli("") == 64);
  CHECK(run_cli("frobnicate") == 64);
  CHECK(run_cli("demo nosuch") == 64);
  CHECK(run_cli("run \"" + good.string() + "\" --dt -1") == 64);

  // dt far above tau makes explicit Euler diverge.
  const auto blowup = dir / "blowup.yaml";
  std::ofstream(blowup) << replace_once(bundled(), "tau: 10\n", "tau: 0.001\n");
  CHECK(run_cli("run \"" + blowup.string() + "\" --out \"" + (dir / "o").string() + "\"") == 2);
  fs::remove_all(dir);
}
