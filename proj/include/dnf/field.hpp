#pragma once

#include <span>
#include <vector>

#include "dnf/convolution.hpp"
#include "dnf/grid.hpp"
#include "dnf/kernel.hpp"
#include "dnf/noise.hpp"

namespace dnf {

struct FieldSpec {
  double tau = 1.0;  // time constant
  double h = -5.0;   // resting level
  double q = 0.0;    // noise strength
  KernelParams kernel;
  SigmoidParams sigmoid;

  void validate() const;
  bool operator==(const FieldSpec&) const = default;
};

struct FieldState {
  std::vector<double> u;
  double t = 0.0;

  bool operator==(const FieldState&) const = default;
};

/// Field resting at h on every site.
FieldState resting_state(const FieldGrid& grid, const FieldSpec& spec, double t = 0.0);

/// One explicit Euler(-Maruyama) step of
///
///   tau du/dt = -u + h + drive + [k * g(u)] + q xi
///
/// with the noise increment scaled as q * sqrt(dt) / tau. `drive` carries every
/// input and coupling term for this field. `noise` may be null when q == 0.
/// Throws NumericalError if any site becomes non-finite.
FieldState field_step(const FieldState& state, const FieldSpec& spec, std::span<const double> drive,
                      const LateralConvolver& interaction, double dt, NoiseSource* noise);

}  // namespace dnf
