#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dnf/field.hpp"
#include "dnf/grid.hpp"
#include "dnf/memory.hpp"

namespace dnf {

/// Linear coupling: strength * u_source is added to the target field's drive.
/// The source may be a field or a memory layer; the target must be a field.
struct CouplingEdge {
  std::string source;
  std::string target;
  double strength = 0.0;

  bool operator==(const CouplingEdge&) const = default;
};

/// Latched production gate. gamma is 0 or 1; `latched` is set while gamma is
/// being held open by supra-threshold activation alone.
struct GateState {
  int gamma = 0;
  bool latched = false;

  bool operator==(const GateState&) const = default;
};

struct ModelSpec {
  FieldGrid grid{-10.0, 10.0, 401};
  std::map<std::string, FieldSpec> fields;
  std::map<std::string, MemorySpec> memories;
  std::vector<CouplingEdge> edges;
  std::set<std::string> gated_fields;
  double clamp_margin = 0.0;
  /// Weight on each field's own direct input (c_response); 1 when absent.
  std::map<std::string, double> response_weights;

  double response_weight(const std::string& field) const;
  bool is_field(const std::string& id) const { return fields.contains(id); }
  bool is_memory(const std::string& id) const { return memories.contains(id); }

  /// Checks every cross-reference and numeric invariant; throws
  /// std::invalid_argument naming the first violation.
  void validate() const;

  bool operator==(const ModelSpec&) const = default;
};

/// Activations of every layer at one instant, keyed by identifier.
struct LayerActivations {
  const std::map<std::string, FieldState>* fields = nullptr;
  const std::map<std::string, MemoryState>* memories = nullptr;
};

/// Non-intrinsic drive for `field_id`:
///   response_weight * direct_input + sum over incoming edges of strength * u_source.
/// Throws std::invalid_argument if a referenced source has no state.
std::vector<double> compose_drive(const ModelSpec& model, const std::string& field_id,
                                  const LayerActivations& layers, std::span<const double> direct_input);

/// Gate cases, first match wins: direct input active -> 1; any u > alpha ->
/// previous value; otherwise 0.
GateState gate_update(const GateState& gate, bool planning_input_active, std::span<const double> planning_u,
                      double alpha);

/// With gamma == 0 every site is clamped to min(u, alpha - margin); with
/// gamma == 1 u is returned unchanged.
std::vector<double> apply_gate(const GateState& gate, std::span<const double> u, double alpha, double margin);

}  // namespace dnf
