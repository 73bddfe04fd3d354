#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dnf/grid.hpp"
#include "dnf/kernel.hpp"

namespace dnf {

// All routines compute the truncated-domain discrete convolution
//
//   out[i] = dx * sum_j kernel_row[i - j + (n - 1)] * activity[j],   0 <= i, j < n
//
// where kernel_row has length 2n - 1 and holds the kernel sampled at grid
// offsets -(n-1)*dx .. +(n-1)*dx. Sites outside the domain contribute nothing.

/// Serial double loop. This is the reference every other path is checked against.
void convolve_reference(std::span<const double> kernel_row, std::span<const double> activity,
                        double dx, std::span<double> out);

/// Same sum with output sites split across OpenMP threads. Each site is
/// accumulated in the same order as the reference, so results are bit-identical.
void convolve_parallel(std::span<const double> kernel_row, std::span<const double> activity,
                       double dx, std::span<double> out);

/// FFT-based linear convolution with the kernel spectrum precomputed once.
/// Copies share the FFTW plans; each copy owns its own scratch buffers, so a
/// single instance must not be used from two threads at once.
class FftConvolver {
 public:
  FftConvolver(std::span<const double> kernel_row, double dx);

  void apply(std::span<const double> activity, std::span<double> out) const;
  std::size_t size() const { return n_; }
  std::size_t transform_length() const { return length_; }

 private:
  struct Plans;
  std::size_t n_;
  std::size_t length_;
  std::shared_ptr<const Plans> plans_;
  std::vector<std::complex<double>> kernel_spectrum_;  // already scaled by dx / length
  mutable std::vector<double> real_buf_;
  mutable std::vector<std::complex<double>> spectrum_buf_;
};

enum class ConvolutionMethod { reference, parallel, fft };

ConvolutionMethod parse_convolution_method(std::string_view name);
std::string_view to_string(ConvolutionMethod method);

/// Kernel sampled on the grid offsets, plus the machinery to apply it to a
/// sigmoided field. One instance per field (or memory) in a running model.
class LateralConvolver {
 public:
  LateralConvolver(const FieldGrid& grid, const KernelParams& kernel,
                   ConvolutionMethod method = ConvolutionMethod::fft);

  const std::vector<double>& kernel_row() const { return kernel_row_; }
  ConvolutionMethod method() const { return method_; }
  double dx() const { return dx_; }

  /// out = dx * sum_j k(x_i - x_j) * activity[j]
  void convolve(std::span<const double> activity, std::span<double> out) const;
  std::vector<double> convolve(std::span<const double> activity) const;

  /// Interaction term for activation u: convolve(g(u)).
  std::vector<double> interaction(std::span<const double> u, const SigmoidParams& sigmoid) const;

 private:
  std::vector<double> kernel_row_;
  double dx_;
  ConvolutionMethod method_;
  std::optional<FftConvolver> fft_;
};

/// Reference-path lateral interaction: sum over x' of k(x - x') g(u(x')) dx.
std::vector<double> lateral_interaction(std::span<const double> u, std::span<const double> kernel_row,
                                        const SigmoidParams& sigmoid, double dx);

}  // namespace dnf
