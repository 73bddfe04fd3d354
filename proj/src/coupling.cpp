#include "dnf/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace dnf {

double ModelSpec::response_weight(const std::string& field) const {
  auto it = response_weights.find(field);
  return it == response_weights.end() ? 1.0 : it->second;
}

void ModelSpec::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };

  if (fields.empty()) fail("model has no fields");
  for (const auto& [id, spec] : fields) {
    if (id.empty()) fail("field identifier must not be empty");
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      fail("field '" + id + "': " + e.what());
    }
  }
  for (const auto& [id, mem] : memories) {
    if (fields.contains(id)) fail("identifier '" + id + "' names both a field and a memory");
    try {
      mem.validate();
    } catch (const std::invalid_argument& e) {
      fail("memory '" + id + "': " + e.what());
    }
    auto src = fields.find(mem.source);
    if (src == fields.end()) fail("memory '" + id + "' references unknown source field '" + mem.source + "'");
    if (!(mem.tau_mem > src->second.tau)) {
      fail("memory '" + id + "': tau_mem must exceed the source field's tau");
    }
  }
  for (const auto& e : edges) {
    if (!fields.contains(e.target)) fail("edge target '" + e.target + "' is not a known field");
    if (!fields.contains(e.source) && !memories.contains(e.source)) {
      fail("edge source '" + e.source + "' is not a known field or memory");
    }
    if (e.source == e.target) fail("edge '" + e.source + "' -> '" + e.target + "' is a self-loop");
    if (!std::isfinite(e.strength)) fail("edge strength must be finite");
  }
  for (const auto& g : gated_fields) {
    if (!fields.contains(g)) fail("gated field '" + g + "' is not a known field");
  }
  if (!(clamp_margin >= 0.0)) fail("clamp_margin must be non-negative");
  for (const auto& [id, w] : response_weights) {
    if (!fields.contains(id)) fail("response weight for unknown field '" + id + "'");
    if (!std::isfinite(w)) fail("response weight must be finite");
  }

  // Field-to-field couplings must not form a cycle.
  std::map<std::string, int> mark;  // 0 unvisited, 1 on stack, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    mark[id] = 1;
    for (const auto& e : edges) {
      if (e.source != id || !fields.contains(e.source)) continue;
      const int m = mark[e.target];
      if (m == 1) fail("field couplings form a cycle through '" + e.target + "'");
      if (m == 0) visit(e.target);
    }
    mark[id] = 2;
  };
  for (const auto& [id, spec] : fields) {
    if (mark[id] == 0) visit(id);
  }
}

std::vector<double> compose_drive(const ModelSpec& model, const std::string& field_id,
                                  const LayerActivations& layers, std::span<const double> direct_input) {
  const std::size_t n = direct_input.size();
  std::vector<double> drive(n);
  const double w = model.response_weight(field_id);
  for (std::size_t i = 0; i < n; ++i) drive[i] = w * direct_input[i];

  for (const auto& e : model.edges) {
    if (e.target != field_id) continue;
    const std::vector<double>* src = nullptr;
    if (layers.fields != nullptr) {
      if (auto it = layers.fields->find(e.source); it != layers.fields->end()) src = &it->second.u;
    }
    if (src == nullptr && layers.memories != nullptr) {
      if (auto it = layers.memories->find(e.source); it != layers.memories->end()) src = &it->second.u_mem;
    }
    if (src == nullptr) throw std::invalid_argument("no state for coupling source '" + e.source + "'");
    if (src->size() != n) throw std::invalid_argument("coupling source '" + e.source + "' has wrong length");
    for (std::size_t i = 0; i < n; ++i) drive[i] += e.strength * (*src)[i];
  }
  return drive;
}

GateState gate_update(const GateState& gate, bool planning_input_active, std::span<const double> planning_u,
                      double alpha) {
  if (planning_input_active) return GateState{1, false};
  const bool above = std::any_of(planning_u.begin(), planning_u.end(), [alpha](double v) { return v > alpha; });
  if (above) return GateState{gate.gamma, gate.gamma == 1};
  return GateState{0, false};
}

std::vector<double> apply_gate(const GateState& gate, std::span<const double> u, double alpha, double margin) {
  std::vector<double> out(u.begin(), u.end());
  if (gate.gamma == 1) return out;
  const double ceiling = alpha - margin;
  for (auto& v : out) v = std::min(v, ceiling);
  return out;
}

}  // namespace dnf
