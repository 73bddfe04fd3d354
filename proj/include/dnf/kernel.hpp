#pragma once

#include <span>
#include <vector>

namespace dnf {

/// Mexican-hat interaction profile: local excitation, surround inhibition and
/// a constant global inhibition.
struct KernelParams {
  double c_excite = 0.0;
  double sigma_excite = 1.0;
  double c_inhibit = 0.0;
  double sigma_inhibit = 1.0;
  double c_global = 0.0;

  /// Throws std::invalid_argument on non-positive sigmas or negative strengths.
  void validate() const;
  bool operator==(const KernelParams&) const = default;
};

struct SigmoidParams {
  double beta = 4.0;   // slope
  double alpha = 0.0;  // threshold

  void validate() const;
  bool operator==(const SigmoidParams&) const = default;
};

/// Kernel value at one offset. Each Gaussian term is scaled by
/// c / sqrt(2*pi*sigma), with sigma (not sigma^2) under the root.
double mexican_hat(double offset, const KernelParams& params);
std::vector<double> mexican_hat(std::span<const double> offsets, const KernelParams& params);

/// Logistic output in [0, 1], evaluated in a form that cannot overflow.
double sigmoid(double u, const SigmoidParams& params);
std::vector<double> sigmoid(std::span<const double> u, const SigmoidParams& params);
void sigmoid(std::span<const double> u, const SigmoidParams& params, std::span<double> out);

}  // namespace dnf
