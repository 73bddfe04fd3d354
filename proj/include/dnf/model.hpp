#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dnf/convolution.hpp"
#include "dnf/coupling.hpp"
#include "dnf/inputs.hpp"
#include "dnf/noise.hpp"

namespace dnf {

/// Complete dynamic state of a multi-layer model. A plain value: copy it to
/// checkpoint or branch a run.
struct ModelState {
  std::map<std::string, FieldState> fields;
  std::map<std::string, MemoryState> memories;
  std::map<std::string, GateState> gates;
  double t = 0.0;

  bool operator==(const ModelState&) const = default;
};

/// One noise stream per field, derived from a single seed.
class NoiseStreams {
 public:
  NoiseStreams(const ModelSpec& spec, std::uint64_t seed);
  NoiseSource* get(const std::string& field);

 private:
  std::map<std::string, NoiseSource> streams_;
};

/// A validated ModelSpec plus the precomputed kernels needed to step it.
/// Convolution scratch buffers live here, so one instance serves one thread.
class Model {
 public:
  explicit Model(ModelSpec spec, ConvolutionMethod method = ConvolutionMethod::fft);

  const ModelSpec& spec() const { return spec_; }
  const FieldGrid& grid() const { return spec_.grid; }

  /// Fields at rest, gates closed, memories taken from `carry` (zero if absent).
  ModelState initial_state(const std::map<std::string, MemoryState>& carry = {}) const;

  /// Advances the whole model from t = step_index * dt to (step_index + 1) * dt.
  /// Order: evaluate inputs at t, compose drives from the states at t, step
  /// every field, update gates, clamp gated fields, then step memories from
  /// the clamped source activation.
  void step(ModelState& state, std::span<const ScheduledInput> inputs, std::size_t step_index, double dt,
            NoiseStreams* noise) const;

 private:
  ModelSpec spec_;
  std::map<std::string, LateralConvolver> field_kernels_;
  std::map<std::string, LateralConvolver> memory_kernels_;
};

}  // namespace dnf
