#include "dnf/memory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dnf/errors.hpp"

namespace dnf {

void MemorySpec::validate() const {
  if (!(tau_mem > 0.0) || !(tau_decay > 0.0)) {
    throw std::invalid_argument("memory time constants must be positive");
  }
  if (!(tau_decay > tau_mem)) throw std::invalid_argument("tau_decay must exceed tau_mem");
  if (source.empty()) throw std::invalid_argument("memory has no source field");
  kernel.validate();
}

MemoryState empty_memory(const FieldGrid& grid, double t) {
  return MemoryState{std::vector<double>(grid.size(), 0.0), t};
}

MemoryState memory_step(const MemoryState& mem, const MemorySpec& spec, std::span<const double> source_u,
                        const SigmoidParams& source_sigmoid, const LateralConvolver& smoothing, double dt) {
  const std::size_t n = mem.u_mem.size();
  if (source_u.size() != n) throw std::invalid_argument("memory_step: source length mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("memory_step: dt must be positive");

  const double alpha = source_sigmoid.alpha;
  const bool accumulating =
      std::any_of(source_u.begin(), source_u.end(), [alpha](double v) { return v > alpha; });
  const auto target = accumulating ? smoothing.interaction(source_u, source_sigmoid) : std::vector<double>(n, 0.0);
  MemoryState next{std::vector<double>(n), mem.t + dt};
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mem.u_mem[i];
    if (source_u[i] > source_sigmoid.alpha) {
      next.u_mem[i] = m + dt / spec.tau_mem * (-m + target[i]);
    } else {
      next.u_mem[i] = m - dt / spec.tau_decay * m;
    }
    if (!std::isfinite(next.u_mem[i])) {
      throw NumericalError("non-finite memory trace at site " + std::to_string(i));
    }
  }
  return next;
}

}  // namespace dnf
