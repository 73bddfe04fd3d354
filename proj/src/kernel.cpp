#include "dnf/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dnf {

void KernelParams::validate() const {
  if (!(sigma_excite > 0.0) || !(sigma_inhibit > 0.0)) {
    throw std::invalid_argument("kernel sigmas must be strictly positive");
  }
  if (!(c_excite >= 0.0) || !(c_inhibit >= 0.0) || !(c_global >= 0.0)) {
    throw std::invalid_argument("kernel strengths must be non-negative");
  }
}

void SigmoidParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("sigmoid beta must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("sigmoid alpha must be finite");
}

double mexican_hat(double offset, const KernelParams& p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double d2 = offset * offset;
  const double excite = p.c_excite / std::sqrt(two_pi * p.sigma_excite) *
                        std::exp(-d2 / (2.0 * p.sigma_excite * p.sigma_excite));
  const double inhibit = p.c_inhibit / std::sqrt(two_pi * p.sigma_inhibit) *
                         std::exp(-d2 / (2.0 * p.sigma_inhibit * p.sigma_inhibit));
  return excite - inhibit - p.c_global;
}

std::vector<double> mexican_hat(std::span<const double> offsets, const KernelParams& params) {
  std::vector<double> out(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = mexican_hat(offsets[i], params);
  return out;
}

double sigmoid(double u, const SigmoidParams& p) {
  const double z = p.beta * (u - p.alpha);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void sigmoid(std::span<const double> u, const SigmoidParams& params, std::span<double> out) {
  if (u.size() != out.size()) throw std::invalid_argument("sigmoid: output length mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = sigmoid(u[i], params);
}

std::vector<double> sigmoid(std::span<const double> u, const SigmoidParams& params) {
  std::vector<double> out(u.size());
  sigmoid(u, params, out);
  return out;
}

}  // namespace dnf
