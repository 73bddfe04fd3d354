#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dnf/coupling.hpp"
#include "dnf/orchestrator.hpp"

namespace dnf {

inline constexpr int kScenarioSchemaVersion = 1;

/// Everything needed to reproduce a run: model topology, trial schedule and
/// run settings. Produced only by a fully validated load.
struct Scenario {
  ModelSpec model;
  std::vector<TrialSpec> schedule;
  RunOptions run;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates a scenario document. Every failure is a ScenarioError
/// whose message starts with "<origin>:<line>:".
Scenario parse_scenario(std::string_view text, std::string_view origin = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical YAML for a scenario; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& scenario);

/// Scenario text compiled into the binary, or empty if `name` is unknown.
std::string_view bundled_scenario(std::string_view name);

}  // namespace dnf
