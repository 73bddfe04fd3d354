#include "dnf/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace dnf {

NoiseStreams::NoiseStreams(const ModelSpec& spec, std::uint64_t seed) {
  std::uint64_t stream = 0;
  for (const auto& [id, field] : spec.fields) streams_.emplace(id, NoiseSource(derive_seed(seed, stream++)));
}

NoiseSource* NoiseStreams::get(const std::string& field) {
  auto it = streams_.find(field);
  return it == streams_.end() ? nullptr : &it->second;
}

Model::Model(ModelSpec spec, ConvolutionMethod method) : spec_(std::move(spec)) {
  spec_.validate();
  for (const auto& [id, field] : spec_.fields) {
    field_kernels_.emplace(id, LateralConvolver(spec_.grid, field.kernel, method));
  }
  for (const auto& [id, mem] : spec_.memories) {
    memory_kernels_.emplace(id, LateralConvolver(spec_.grid, mem.kernel, method));
  }
}

ModelState Model::initial_state(const std::map<std::string, MemoryState>& carry) const {
  ModelState state;
  for (const auto& [id, field] : spec_.fields) state.fields.emplace(id, resting_state(spec_.grid, field));
  for (const auto& [id, mem] : spec_.memories) {
    auto it = carry.find(id);
    MemoryState m = it != carry.end() ? it->second : empty_memory(spec_.grid);
    if (m.u_mem.size() != spec_.grid.size()) throw std::invalid_argument("carried memory '" + id + "' has wrong length");
    m.t = 0.0;
    state.memories.emplace(id, std::move(m));
  }
  for (const auto& id : spec_.gated_fields) state.gates.emplace(id, GateState{});
  return state;
}

void Model::step(ModelState& state, std::span<const ScheduledInput> inputs, std::size_t step_index, double dt,
                 NoiseStreams* noise) const {
  const double t = static_cast<double>(step_index) * dt;
  const double t_next = static_cast<double>(step_index + 1) * dt;
  const LayerActivations layers{&state.fields, &state.memories};

  std::map<std::string, FieldState> next_fields;
  std::map<std::string, bool> direct_active;
  for (const auto& [id, field] : spec_.fields) {
    const auto direct = evaluate_inputs(inputs, id, spec_.grid, t);
    const double w = spec_.response_weight(id);
    direct_active[id] = std::any_of(direct.begin(), direct.end(), [w](double s) { return w * s > 0.0; });
    const auto drive = compose_drive(spec_, id, layers, direct);
    NoiseSource* src = noise != nullptr ? noise->get(id) : nullptr;
    FieldState next = field_step(state.fields.at(id), field, drive, field_kernels_.at(id), dt, src);
    next.t = t_next;
    next_fields.emplace(id, std::move(next));
  }

  for (auto& [id, gate] : state.gates) {
    auto& f = next_fields.at(id);
    const double alpha = spec_.fields.at(id).sigmoid.alpha;
    gate = gate_update(gate, direct_active.at(id), f.u, alpha);
    f.u = apply_gate(gate, f.u, alpha, spec_.clamp_margin);
  }

  for (auto& [id, mem] : state.memories) {
    const auto& mspec = spec_.memories.at(id);
    const auto& source = next_fields.at(mspec.source);
    const auto& sig = spec_.fields.at(mspec.source).sigmoid;
    mem = memory_step(mem, mspec, source.u, sig, memory_kernels_.at(id), dt);
    mem.t = t_next;
  }

  state.fields = std::move(next_fields);
  state.t = t_next;
}

}  // namespace dnf
