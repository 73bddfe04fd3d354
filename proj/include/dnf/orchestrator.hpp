#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dnf/inputs.hpp"
#include "dnf/model.hpp"
#include "dnf/taskdyn.hpp"

namespace dnf {

struct TrialSpec {
  std::string label;
  std::vector<ScheduledInput> inputs;
  double duration = 0.0;
  std::optional<TimeWindow> measure_window;  // default: see default_measure_window

  /// Checks positive duration, input windows inside [0, duration] and input
  /// targets against the model.
  void validate(const ModelSpec& model) const;
  bool operator==(const TrialSpec&) const = default;
};

/// Final 20% of the latest input window aimed at `measure_field`, or the final
/// 20% of the trial if no input targets it.
TimeWindow default_measure_window(const TrialSpec& trial, const std::string& measure_field);

/// Dense row-major matrix; rows are time steps, columns are grid sites.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  void append_row(std::span<const double> row);
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  bool operator==(const Matrix&) const = default;
};

struct TimePoint {
  double t = 0.0;
  double x = 0.0;
  bool operator==(const TimePoint&) const = default;
};

enum class PlateauStatus { ok, no_valid_entries, no_plateau };

struct TrialResult {
  std::string label;
  double duration = 0.0;
  TimeWindow measure_window;
  std::optional<double> peak_position;
  PlateauStatus plateau_status = PlateauStatus::no_valid_entries;
  TargetTrace peak_trace;
  std::optional<double> threshold_onset;
  std::map<std::string, Matrix> field_history;  // fields and memories, empty unless recorded
  std::vector<TimePoint> tract_trajectory;
};

struct OscillatorConfig {
  OscillatorParams params;
  TargetMode mode = TargetMode::plateau_constant;
  double x0 = 0.0;
  double dt = 0.01;

  void validate() const;
  bool operator==(const OscillatorConfig&) const = default;
};

struct RunOptions {
  double dt = 0.1;
  std::uint64_t seed = 0;
  bool record_history = false;
  std::string measure_field = "planning";
  ConvolutionMethod convolution = ConvolutionMethod::fft;
  double plateau_std_tol = 0.05;
  bool subgrid_refinement = false;
  std::optional<OscillatorConfig> oscillator;

  bool operator==(const RunOptions&) const = default;
};

using MemoryBank = std::map<std::string, MemoryState>;

struct ExperimentResult {
  std::vector<TrialResult> trials;
  std::vector<MemoryBank> memory_snapshots;  // state after each trial
  std::optional<double> shift;               // last trial peak - first trial peak
  std::vector<std::optional<double>> convergence;  // baseline peak - peak, for trials between first and last

  std::optional<double> shift_from_baseline(std::size_t trial) const;
};

/// Runs one trial: fields start at rest, memories start from `carry`.
/// Numerical failures are rethrown as NumericalError naming the trial and step.
std::pair<TrialResult, MemoryBank> run_trial(const Model& model, const TrialSpec& trial, const MemoryBank& carry,
                                             std::uint64_t seed, const RunOptions& options);

/// Runs the schedule in order, threading memory between trials. Trial i uses
/// derive_seed(options.seed, i) for its noise.
ExperimentResult run_experiment(const Model& model, const std::vector<TrialSpec>& schedule,
                                const RunOptions& options);

/// Same experiment for several seeds, distributed over OpenMP threads. Each
/// thread builds its own Model, so results match serial runs exactly.
std::vector<ExperimentResult> run_ensemble(const ModelSpec& spec, const std::vector<TrialSpec>& schedule,
                                           const RunOptions& options, std::span<const std::uint64_t> seeds);

/// Oscillator trajectory over the trial's duration, starting at rest at x0.
/// Plateau mode drives toward the trial's plateau peak (throws PlateauError if
/// there is none); time-varying mode follows the per-step peak trace, holding
/// the last valid target through sub-threshold stretches.
std::vector<TimePoint> simulate_tract_variable(const TrialResult& result, const OscillatorConfig& config);

/// Earliest row time r * dt whose maximum exceeds alpha.
std::optional<double> threshold_onset(const Matrix& history, double alpha, double dt);

}  // namespace dnf
