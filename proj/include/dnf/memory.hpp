#pragma once

#include <span>
#include <string>
#include <vector>

#include "dnf/convolution.hpp"
#include "dnf/grid.hpp"
#include "dnf/kernel.hpp"

namespace dnf {

/// Hebbian trace layer attached to one source (planning) field.
struct MemorySpec {
  double tau_mem = 1.0;    // accumulation time constant
  double tau_decay = 2.0;  // decay time constant, must exceed tau_mem
  KernelParams kernel;     // smoothing kernel w(x - x')
  std::string source;      // field whose supra-threshold activity is stored

  void validate() const;
  bool operator==(const MemorySpec&) const = default;
};

struct MemoryState {
  std::vector<double> u_mem;
  double t = 0.0;

  bool operator==(const MemoryState&) const = default;
};

MemoryState empty_memory(const FieldGrid& grid, double t = 0.0);

/// One Euler step of the trace, decided site by site:
///   source u > alpha : du_mem/dt = (-u_mem + [w * g(u)]) / tau_mem
///   otherwise        : du_mem/dt = -u_mem / tau_decay
/// g and alpha are the source field's sigmoid.
MemoryState memory_step(const MemoryState& mem, const MemorySpec& spec, std::span<const double> source_u,
                        const SigmoidParams& source_sigmoid, const LateralConvolver& smoothing, double dt);

}  // namespace dnf
