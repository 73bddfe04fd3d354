#include "dnf/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "dnf/errors.hpp"

namespace dnf {

void TrialSpec::validate(const ModelSpec& model) const {
  if (label.empty()) throw std::invalid_argument("trial label must not be empty");
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("trial '" + label + "': duration must be positive");
  }
  for (const auto& in : inputs) {
    in.validate();
    if (!model.is_field(in.target_field)) {
      throw std::invalid_argument("trial '" + label + "': input targets unknown field '" + in.target_field + "'");
    }
    if (in.t_on < 0.0 || in.t_off > duration) {
      throw std::invalid_argument("trial '" + label + "': input window lies outside [0, duration]");
    }
  }
  if (measure_window && !(measure_window->begin <= measure_window->end && measure_window->begin >= 0.0 &&
                          measure_window->end <= duration)) {
    throw std::invalid_argument("trial '" + label + "': measure window must lie inside [0, duration]");
  }
}

TimeWindow default_measure_window(const TrialSpec& trial, const std::string& measure_field) {
  const ScheduledInput* latest = nullptr;
  for (const auto& in : trial.inputs) {
    if (in.target_field == measure_field && (latest == nullptr || in.t_off > latest->t_off)) latest = &in;
  }
  const double begin = latest != nullptr ? latest->t_on : 0.0;
  const double end = latest != nullptr ? latest->t_off : trial.duration;
  return {end - 0.2 * (end - begin), end};
}

void Matrix::append_row(std::span<const double> r) {
  if (rows == 0 && cols == 0) cols = r.size();
  if (r.size() != cols) throw std::invalid_argument("Matrix::append_row: width mismatch");
  data.insert(data.end(), r.begin(), r.end());
  ++rows;
}

void OscillatorConfig::validate() const {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("oscillator dt must be positive");
  if (!std::isfinite(x0)) throw std::invalid_argument("oscillator x0 must be finite");
}

std::optional<double> ExperimentResult::shift_from_baseline(std::size_t trial) const {
  if (trials.empty() || trial >= trials.size()) return std::nullopt;
  const auto& base = trials.front().peak_position;
  const auto& peak = trials[trial].peak_position;
  if (!base || !peak) return std::nullopt;
  return *peak - *base;
}

namespace {

std::size_t step_count(double duration, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double steps = duration / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("trial duration must be a whole number of steps of dt");
  }
  return static_cast<std::size_t>(rounded);
}

double max_of(std::span<const double> u) { return *std::max_element(u.begin(), u.end()); }

}  // namespace

std::pair<TrialResult, MemoryBank> run_trial(const Model& model, const TrialSpec& trial, const MemoryBank& carry,
                                             std::uint64_t seed, const RunOptions& options) {
  const auto& spec = model.spec();
  trial.validate(spec);
  if (!spec.is_field(options.measure_field)) {
    throw std::invalid_argument("measure field '" + options.measure_field + "' is not a known field");
  }
  const std::size_t steps = step_count(trial.duration, options.dt);
  const double alpha = spec.fields.at(options.measure_field).sigmoid.alpha;
  const auto& grid = model.grid();

  TrialResult result;
  result.label = trial.label;
  result.duration = trial.duration;
  result.measure_window = trial.measure_window.value_or(default_measure_window(trial, options.measure_field));

  ModelState state = model.initial_state(carry);
  NoiseStreams noise(spec, seed);
  std::optional<double> last_valid;

  auto observe = [&](std::size_t row) {
    const auto& u = state.fields.at(options.measure_field).u;
    const double t = static_cast<double>(row) * options.dt;
    const auto est = extract_target(u, grid, alpha, last_valid, 0.0, options.subgrid_refinement);
    if (est.valid) {
      last_valid = est.target;
      if (!result.threshold_onset) result.threshold_onset = t;
    }
    result.peak_trace.push(t, last_valid, est.valid);
    if (options.record_history) {
      for (const auto& [id, f] : state.fields) result.field_history[id].append_row(f.u);
      for (const auto& [id, m] : state.memories) result.field_history[id].append_row(m.u_mem);
    }
  };

  observe(0);
  for (std::size_t n = 0; n < steps; ++n) {
    try {
      model.step(state, trial.inputs, n, options.dt, &noise);
    } catch (const NumericalError& e) {
      throw NumericalError("trial '" + trial.label + "', step " + std::to_string(n) + ": " + e.what());
    }
    observe(n + 1);
  }

  try {
    result.peak_position = plateau_target(result.peak_trace, result.measure_window, options.plateau_std_tol);
    result.plateau_status = PlateauStatus::ok;
  } catch (const PlateauError& e) {
    result.plateau_status = e.kind() == PlateauError::Kind::no_plateau ? PlateauStatus::no_plateau
                                                                        : PlateauStatus::no_valid_entries;
  }
  return {std::move(result), std::move(state.memories)};
}

ExperimentResult run_experiment(const Model& model, const std::vector<TrialSpec>& schedule,
                                const RunOptions& options) {
  if (schedule.empty()) throw std::invalid_argument("experiment schedule is empty");
  if (options.oscillator) options.oscillator->validate();

  ExperimentResult out;
  MemoryBank memory;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    auto [trial, next_memory] = run_trial(model, schedule[i], memory, derive_seed(options.seed, i), options);
    if (options.oscillator) {
      const bool drivable =
          options.oscillator->mode == TargetMode::time_varying || trial.peak_position.has_value();
      if (drivable) trial.tract_trajectory = simulate_tract_variable(trial, *options.oscillator);
    }
    out.trials.push_back(std::move(trial));
    memory = std::move(next_memory);
    out.memory_snapshots.push_back(memory);
  }

  const auto& base = out.trials.front().peak_position;
  const auto& last = out.trials.back().peak_position;
  if (base && last) out.shift = *last - *base;
  for (std::size_t i = 1; i + 1 < out.trials.size(); ++i) {
    const auto& p = out.trials[i].peak_position;
    out.convergence.push_back(base && p ? std::optional<double>(*base - *p) : std::nullopt);
  }
  return out;
}

std::vector<ExperimentResult> run_ensemble(const ModelSpec& spec, const std::vector<TrialSpec>& schedule,
                                           const RunOptions& options, std::span<const std::uint64_t> seeds) {
  std::vector<ExperimentResult> results(seeds.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      Model model(spec, options.convolution);
      RunOptions local = options;
      local.seed = seeds[static_cast<std::size_t>(i)];
      results[static_cast<std::size_t>(i)] = run_experiment(model, schedule, local);
    } catch (...) {
#pragma omp critical(dnf_ensemble_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<TimePoint> simulate_tract_variable(const TrialResult& result, const OscillatorConfig& config) {
  config.validate();
  std::optional<double> constant_target;
  if (config.mode == TargetMode::plateau_constant) {
    if (!result.peak_position) {
      throw PlateauError(result.plateau_status == PlateauStatus::no_plateau ? PlateauError::Kind::no_plateau
                                                                            : PlateauError::Kind::no_valid_entries,
                         "trial '" + result.label + "' has no plateau target");
    }
    constant_target = result.peak_position;
  }

  const std::size_t steps = step_count(result.duration, config.dt);
  const auto& trace = result.peak_trace;
  std::vector<TimePoint> out;
  out.reserve(steps + 1);
  OscillatorState s{config.x0, 0.0, 0.0};
  out.push_back({0.0, s.x_tv});
  std::size_t cursor = 0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * config.dt;
    double target = s.x_tv;
    if (constant_target) {
      target = *constant_target;
    } else {
      // Latest trace entry at or before t (zero-order hold between field steps).
      while (cursor + 1 < trace.size() && trace.times[cursor + 1] <= t + 1e-12) ++cursor;
      if (cursor < trace.size() && trace.values[cursor]) target = *trace.values[cursor];
    }
    s = oscillator_step(s, config.params, target, config.dt);
    s.t = static_cast<double>(n + 1) * config.dt;
    out.push_back({s.t, s.x_tv});
  }
  return out;
}

std::optional<double> threshold_onset(const Matrix& history, double alpha, double dt) {
  for (std::size_t r = 0; r < history.rows; ++r) {
    if (max_of(history.row(r)) > alpha) return static_cast<double>(r) * dt;
  }
  return std::nullopt;
}

}  // namespace dnf
