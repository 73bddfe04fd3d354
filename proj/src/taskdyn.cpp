#include "dnf/taskdyn.hpp"

#include <cmath>
#include <string>

#include "dnf/errors.hpp"

namespace dnf {

double OscillatorParams::damping() const { return 2.0 * std::sqrt(k_stiffness * mass); }
double OscillatorParams::omega() const { return std::sqrt(k_stiffness / mass); }

void OscillatorParams::validate() const {
  if (!(k_stiffness > 0.0) || !std::isfinite(k_stiffness)) {
    throw std::invalid_argument("oscillator k_stiffness must be positive");
  }
}

OscillatorState oscillator_step(const OscillatorState& s, const OscillatorParams& params, double target,
                                double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("oscillator_step: dt must be positive");
  // y = x - target solves y = (A + B t) e^{-w t} with A = y0, B = v0 + w y0.
  const double w = params.omega();
  const double y0 = s.x_tv - target;
  const double b = s.v_tv + w * y0;
  const double decay = std::exp(-w * dt);
  OscillatorState next{target + (y0 + b * dt) * decay, (s.v_tv - w * b * dt) * decay, s.t + dt};
  if (!std::isfinite(next.x_tv) || !std::isfinite(next.v_tv)) {
    throw NumericalError("non-finite oscillator state at t=" + std::to_string(next.t));
  }
  return next;
}

void TargetTrace::push(double t, std::optional<double> value, bool is_valid) {
  times.push_back(t);
  values.push_back(value);
  valid.push_back(is_valid);
}

TargetEstimate extract_target(std::span<const double> u, const FieldGrid& grid, double alpha,
                              std::optional<double> previous_target, double rest_position,
                              bool subgrid_refinement) {
  if (u.size() != grid.size()) throw std::invalid_argument("extract_target: length mismatch");
  std::size_t best = 0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i] > u[best]) best = i;
  }
  if (!(u[best] > alpha)) return {previous_target.value_or(rest_position), false};

  double x = grid.site(best);
  if (subgrid_refinement && best > 0 && best + 1 < u.size()) {
    const double l = u[best - 1], c = u[best], r = u[best + 1];
    const double denom = l - 2.0 * c + r;
    if (denom < 0.0) x += 0.5 * (l - r) / denom * grid.dx();
  }
  return {x, true};
}

double plateau_target(const TargetTrace& trace, const TimeWindow& window, double std_tol) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.valid[i] && window.contains(trace.times[i])) {
      sum += *trace.values[i];
      ++count;
    }
  }
  if (count == 0) {
    throw PlateauError(PlateauError::Kind::no_valid_entries, "no above-threshold peak inside the measurement window");
  }
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.valid[i] && window.contains(trace.times[i])) {
      const double d = *trace.values[i] - mean;
      ss += d * d;
    }
  }
  const double sd = std::sqrt(ss / static_cast<double>(count));
  if (!(sd < std_tol)) {
    throw PlateauError(PlateauError::Kind::no_plateau,
                       "peak position is not stable inside the measurement window (std " + std::to_string(sd) +
                           " >= " + std::to_string(std_tol) + ")");
  }
  return mean;
}

}  // namespace dnf
