#include "dnf/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dnf {

FieldGrid::FieldGrid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw std::invalid_argument("grid bounds must satisfy x_min < x_max");
  }
  if (n_points < 3) {
    throw std::invalid_argument("grid needs at least 3 points, got " + std::to_string(n_points));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

double FieldGrid::site(std::size_t i) const {
  if (i + 1 == n_) return x_max_;
  return x_min_ + static_cast<double>(i) * dx_;
}

std::vector<double> FieldGrid::sites() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = site(i);
  return xs;
}

std::vector<double> FieldGrid::offsets() const {
  const auto n = static_cast<long long>(n_);
  std::vector<double> off(2 * n_ - 1);
  for (long long m = 0; m < 2 * n - 1; ++m) {
    off[static_cast<std::size_t>(m)] = static_cast<double>(m - (n - 1)) * dx_;
  }
  return off;
}

FieldGrid build_grid(double x_min, double x_max, long long n_points) {
  if (n_points < 3) {
    throw std::invalid_argument("grid needs at least 3 points, got " + std::to_string(n_points));
  }
  return FieldGrid(x_min, x_max, static_cast<std::size_t>(n_points));
}

}  // namespace dnf
