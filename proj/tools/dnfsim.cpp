// dnfsim: command-line front end for the coupled neural-field engine.
//
//   dnfsim run <scenario> [--out DIR] [--seed N] [--dt X] [--record-history]
//   dnfsim validate <scenario>
//   dnfsim demo shadowing [--out DIR]
//
// Exit codes: 0 success, 1 scenario error, 2 numerical abort, 64 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "dnf/errors.hpp"
#include "dnf/orchestrator.hpp"
#include "dnf/results.hpp"
#include "dnf/scenario.hpp"

namespace {

constexpr int kExitScenario = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitUsage = 64;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool record_history = false;
};

void print_summary(const dnf::Scenario& sc, const std::string& origin) {
  std::cout << "ok: " << origin << ": " << sc.model.fields.size() << " fields, " << sc.model.memories.size()
            << " memories, " << sc.model.edges.size() << " edges, " << sc.model.gated_fields.size()
            << " gated, " << sc.schedule.size() << " trials\n";
}

int execute(dnf::Scenario sc, const Overrides& ov, const std::string& out_dir) {
  if (ov.seed) sc.run.seed = *ov.seed;
  if (ov.dt) sc.run.dt = *ov.dt;
  if (ov.record_history) sc.run.record_history = true;

  const dnf::Model model(sc.model, sc.run.convolution);
  const auto experiment = dnf::run_experiment(model, sc.schedule, sc.run);
  const auto bundle = dnf::make_bundle(experiment);
  const auto files = dnf::write_results(bundle, out_dir);

  std::cout << dnf::metrics_table(bundle);
  std::cout << "baseline_to_final_shift," << dnf::format_value(experiment.shift) << "\n";
  std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled dynamic neural field simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "results";
  Overrides ov;
  std::uint64_t seed = 0;
  double dt = 0.0;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario YAML file")->required();
  run->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  auto* dt_opt = run->add_option("--dt", dt, "Override the integration step")->check(CLI::PositiveNumber);
  run->add_flag("--record-history", ov.record_history, "Write per-trial activation heatmaps");

  auto* validate = app.add_subcommand("validate", "Load and validate a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario YAML file")->required();

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Run a bundled scenario");
  demo->add_option("name", demo_name, "Bundled scenario name")->required()->check(CLI::IsMember({"shadowing"}));
  demo->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }
  if (*seed_opt) ov.seed = seed;
  if (*dt_opt) ov.dt = dt;

  try {
    if (*validate) {
      print_summary(dnf::load_scenario(scenario_path), scenario_path);
      return 0;
    }
    if (*run) return execute(dnf::load_scenario(scenario_path), ov, out_dir);
    if (*demo) {
      const auto text = dnf::bundled_scenario(demo_name);
      return execute(dnf::parse_scenario(text, "<bundled:" + demo_name + ">"), ov, out_dir);
    }
  } catch (const dnf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const dnf::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitScenario;
  } catch (const std::invalid_argument& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitScenario;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitScenario;
  }
  return kExitUsage;
}
