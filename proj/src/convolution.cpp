#include "dnf/convolution.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <string>

namespace dnf {

namespace {

// FFTW's planner and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void check_lengths(std::span<const double> kernel_row, std::span<const double> activity,
                   std::span<double> out) {
  if (activity.size() != out.size()) {
    throw std::invalid_argument("convolution: output length " + std::to_string(out.size()) +
                                " does not match input length " + std::to_string(activity.size()));
  }
  if (kernel_row.size() + 1 != 2 * activity.size()) {
    throw std::invalid_argument("convolution: kernel row length " + std::to_string(kernel_row.size()) +
                                " does not span a grid of " + std::to_string(activity.size()) + " sites");
  }
}

// Smallest 2^a 3^b 5^c 7^d >= n.
std::size_t smooth_length(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u, 7u}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

}  // namespace

void convolve_reference(std::span<const double> kernel_row, std::span<const double> activity,
                        double dx, std::span<double> out) {
  check_lengths(kernel_row, activity, out);
  const std::size_t n = activity.size();
  for (std::size_t i = 0; i < n; ++i) {
    // kernel_row[i - j + n - 1] for j = 0..n-1 walks backwards from i + n - 1.
    const double* k = kernel_row.data() + i + n - 1;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += k[-static_cast<std::ptrdiff_t>(j)] * activity[j];
    out[i] = acc * dx;
  }
}

void convolve_parallel(std::span<const double> kernel_row, std::span<const double> activity,
                       double dx, std::span<double> out) {
  check_lengths(kernel_row, activity, out);
  const auto n = static_cast<std::ptrdiff_t>(activity.size());
  const double* kr = kernel_row.data();
  const double* a = activity.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* k = kr + i + n - 1;
    double acc = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) acc += k[-j] * a[j];
    o[i] = acc * dx;
  }
}

struct FftConvolver::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t length) {
    std::vector<double> r(length);
    std::vector<std::complex<double>> c(length / 2 + 1);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const int len = static_cast<int>(length);
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_r2c_1d(len, r.data(), cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward = fftw_plan_dft_c2r_1d(len, cp, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (forward == nullptr || backward == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

FftConvolver::FftConvolver(std::span<const double> kernel_row, double dx)
    : n_((kernel_row.size() + 1) / 2), length_(0) {
  if (kernel_row.size() < 5 || kernel_row.size() % 2 == 0) {
    throw std::invalid_argument("FftConvolver: kernel row must have odd length 2n-1 with n >= 3");
  }
  length_ = smooth_length(2 * n_ - 1);
  plans_ = std::make_shared<const Plans>(length_);
  real_buf_.assign(length_, 0.0);
  spectrum_buf_.assign(length_ / 2 + 1, {0.0, 0.0});

  // Wrap the kernel into circular order: non-negative offsets first, negative
  // offsets at the tail. length_ >= 2n-1 keeps the two halves from aliasing.
  std::vector<double> wrapped(length_, 0.0);
  for (std::size_t d = 0; d < n_; ++d) wrapped[d] = kernel_row[n_ - 1 + d];
  for (std::size_t d = 1; d < n_; ++d) wrapped[length_ - d] = kernel_row[n_ - 1 - d];

  kernel_spectrum_.assign(length_ / 2 + 1, {0.0, 0.0});
  fftw_execute_dft_r2c(plans_->forward, wrapped.data(),
                       reinterpret_cast<fftw_complex*>(kernel_spectrum_.data()));
  const double scale = dx / static_cast<double>(length_);
  for (auto& c : kernel_spectrum_) c *= scale;
}

void FftConvolver::apply(std::span<const double> activity, std::span<double> out) const {
  if (activity.size() != n_ || out.size() != n_) {
    throw std::invalid_argument("FftConvolver: expected " + std::to_string(n_) + " sites");
  }
  std::copy(activity.begin(), activity.end(), real_buf_.begin());
  std::fill(real_buf_.begin() + static_cast<std::ptrdiff_t>(n_), real_buf_.end(), 0.0);
  auto* spec = reinterpret_cast<fftw_complex*>(spectrum_buf_.data());
  fftw_execute_dft_r2c(plans_->forward, real_buf_.data(), spec);
  for (std::size_t k = 0; k < spectrum_buf_.size(); ++k) spectrum_buf_[k] *= kernel_spectrum_[k];
  fftw_execute_dft_c2r(plans_->backward, spec, real_buf_.data());
  std::copy_n(real_buf_.begin(), n_, out.begin());
}

ConvolutionMethod parse_convolution_method(std::string_view name) {
  if (name == "reference") return ConvolutionMethod::reference;
  if (name == "parallel") return ConvolutionMethod::parallel;
  if (name == "fft") return ConvolutionMethod::fft;
  throw std::invalid_argument("unknown convolution method '" + std::string(name) +
                              "' (expected reference, parallel or fft)");
}

std::string_view to_string(ConvolutionMethod method) {
  switch (method) {
    case ConvolutionMethod::reference: return "reference";
    case ConvolutionMethod::parallel: return "parallel";
    case ConvolutionMethod::fft: return "fft";
  }
  return "?";
}

LateralConvolver::LateralConvolver(const FieldGrid& grid, const KernelParams& kernel,
                                   ConvolutionMethod method)
    : kernel_row_(mexican_hat(grid.offsets(), kernel)), dx_(grid.dx()), method_(method) {
  if (method_ == ConvolutionMethod::fft) fft_.emplace(kernel_row_, dx_);
}

void LateralConvolver::convolve(std::span<const double> activity, std::span<double> out) const {
  switch (method_) {
    case ConvolutionMethod::reference: convolve_reference(kernel_row_, activity, dx_, out); break;
    case ConvolutionMethod::parallel: convolve_parallel(kernel_row_, activity, dx_, out); break;
    case ConvolutionMethod::fft: fft_->apply(activity, out); break;
  }
}

std::vector<double> LateralConvolver::convolve(std::span<const double> activity) const {
  std::vector<double> out(activity.size());
  convolve(activity, out);
  return out;
}

std::vector<double> LateralConvolver::interaction(std::span<const double> u,
                                                  const SigmoidParams& sigmoid_params) const {
  return convolve(sigmoid(u, sigmoid_params));
}

std::vector<double> lateral_interaction(std::span<const double> u, std::span<const double> kernel_row,
                                        const SigmoidParams& sigmoid_params, double dx) {
  const auto g = sigmoid(u, sigmoid_params);
  std::vector<double> out(u.size());
  convolve_reference(kernel_row, g, dx, out);
  return out;
}

}  // namespace dnf
