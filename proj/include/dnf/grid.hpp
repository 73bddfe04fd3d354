#pragma once

#include <cstddef>
#include <vector>

namespace dnf {

/// Uniformly spaced sampling of the field's metric dimension.
class FieldGrid {
 public:
  /// Throws std::invalid_argument unless x_min < x_max and n_points >= 3.
  FieldGrid(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }

  /// Position of site i. site(size() - 1) == x_max exactly.
  double site(std::size_t i) const;
  std::vector<double> sites() const;

  /// Offsets x_i - x_j for every index difference, -(n-1)*dx .. +(n-1)*dx.
  /// Entry m holds index difference m - (n - 1).
  std::vector<double> offsets() const;

  bool operator==(const FieldGrid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

FieldGrid build_grid(double x_min, double x_max, long long n_points);

}  // namespace dnf
