#include "dnf/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dnf/errors.hpp"

namespace dnf {

void FieldSpec::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("field tau must be positive");
  if (!std::isfinite(h)) throw std::invalid_argument("field resting level h must be finite");
  if (!(q >= 0.0)) throw std::invalid_argument("field noise q must be non-negative");
  kernel.validate();
  sigmoid.validate();
}

FieldState resting_state(const FieldGrid& grid, const FieldSpec& spec, double t) {
  return FieldState{std::vector<double>(grid.size(), spec.h), t};
}

FieldState field_step(const FieldState& state, const FieldSpec& spec, std::span<const double> drive,
                      const LateralConvolver& interaction, double dt, NoiseSource* noise) {
  const std::size_t n = state.u.size();
  if (!(dt > 0.0)) throw std::invalid_argument("field_step: dt must be positive");
  if (drive.size() != n) throw std::invalid_argument("field_step: drive length mismatch");

  const auto lateral = interaction.interaction(state.u, spec.sigmoid);

  FieldState next{std::vector<double>(n), state.t + dt};
  const double rate = dt / spec.tau;
  for (std::size_t i = 0; i < n; ++i) {
    next.u[i] = state.u[i] + rate * (-state.u[i] + spec.h + drive[i] + lateral[i]);
  }
  if (spec.q > 0.0) {
    if (noise == nullptr) throw std::invalid_argument("field_step: q > 0 requires a noise source");
    const double scale = spec.q * std::sqrt(dt) / spec.tau;
    for (std::size_t i = 0; i < n; ++i) next.u[i] += scale * noise->normal();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(next.u[i])) {
      throw NumericalError("non-finite activation at site " + std::to_string(i) + " at t=" +
                           std::to_string(next.t) + " (dt too large?)");
    }
  }
  return next;
}

}  // namespace dnf
