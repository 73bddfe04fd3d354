#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dnf {

/// Deterministic standard-normal stream.
///
/// std::normal_distribution is implementation-defined, so normals are drawn
/// with Box-Muller on top of mt19937_64, whose output sequence is fixed by the
/// standard. The same seed yields the same stream on every conforming library.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed);

  double normal();
  void fill_normal(std::span<double> out);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;

  double uniform_open();  // (0, 1)
};

/// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace dnf
