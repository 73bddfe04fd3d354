#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dnf/grid.hpp"

namespace dnf {

/// Unit-mass, critically damped point attractor: b = 2 sqrt(k).
struct OscillatorParams {
  double k_stiffness = 1.0;

  static constexpr double mass = 1.0;
  double damping() const;
  double omega() const;  // sqrt(k / m)
  void validate() const;
  bool operator==(const OscillatorParams&) const = default;
};

struct OscillatorState {
  double x_tv = 0.0;
  double v_tv = 0.0;
  double t = 0.0;
};

/// Advances x'' + b x' + k (x - target) = 0 by dt with the target held fixed
/// over the step. Uses the closed-form critically damped propagator, so the
/// update is exact for piecewise-constant targets and never overshoots.
OscillatorState oscillator_step(const OscillatorState& state, const OscillatorParams& params, double target,
                                double dt);

enum class TargetMode { time_varying, plateau_constant };

/// Per-step argmax readout of the planning field.
struct TargetTrace {
  std::vector<double> times;
  std::vector<std::optional<double>> values;  // held target; empty before the first valid peak
  std::vector<bool> valid;                    // true where the field was above threshold

  void push(double t, std::optional<double> value, bool is_valid);
  std::size_t size() const { return times.size(); }
  bool operator==(const TargetTrace&) const = default;
};

struct TargetEstimate {
  double target = 0.0;
  bool valid = false;
};

/// If max(u) > alpha: the grid site of the maximum (lowest index on ties),
/// optionally refined by a parabola through the neighbouring sites.
/// Otherwise the previous target is held, or `rest_position` when there is none.
TargetEstimate extract_target(std::span<const double> u, const FieldGrid& grid, double alpha,
                              std::optional<double> previous_target, double rest_position,
                              bool subgrid_refinement = false);

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;

  bool contains(double t) const { return begin <= t && t <= end; }
  bool operator==(const TimeWindow&) const = default;
};

class PlateauError : public std::runtime_error {
 public:
  enum class Kind { no_valid_entries, no_plateau };
  PlateauError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Mean of the valid peak positions inside `window`, provided their
/// (population) standard deviation is below std_tol.
double plateau_target(const TargetTrace& trace, const TimeWindow& window, double std_tol);

}  // namespace dnf
