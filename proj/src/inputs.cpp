#include "dnf/inputs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnf {

double GaussianBump::operator()(double x) const {
  const double d = x - center;
  return amplitude * std::exp(-(d * d) / (2.0 * width * width));
}

void ScheduledInput::validate() const {
  if (!(bump.width > 0.0)) throw std::invalid_argument("input width must be positive");
  if (!std::isfinite(bump.amplitude) || !std::isfinite(bump.center)) {
    throw std::invalid_argument("input amplitude and center must be finite");
  }
  if (!(t_on < t_off)) throw std::invalid_argument("input window must satisfy t_on < t_off");
  if (target_field.empty()) throw std::invalid_argument("input has no target field");
}

std::vector<double> evaluate_inputs(std::span<const ScheduledInput> inputs, std::string_view field_id,
                                    const FieldGrid& grid, double t) {
  std::vector<double> out(grid.size(), 0.0);
  for (const auto& in : inputs) {
    if (in.target_field != field_id || !in.active_at(t)) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += in.bump(grid.site(i));
  }
  return out;
}

InputSchedule::InputSchedule(std::vector<ScheduledInput> inputs, std::vector<std::string> fields)
    : inputs_(std::move(inputs)), fields_(std::move(fields)) {
  for (const auto& in : inputs_) {
    in.validate();
    if (std::find(fields_.begin(), fields_.end(), in.target_field) == fields_.end()) {
      throw std::invalid_argument("input targets unknown field '" + in.target_field + "'");
    }
  }
}

std::vector<double> InputSchedule::evaluate(std::string_view field_id, const FieldGrid& grid,
                                            double t) const {
  if (std::find(fields_.begin(), fields_.end(), field_id) == fields_.end()) {
    throw std::invalid_argument("unknown field '" + std::string(field_id) + "'");
  }
  return evaluate_inputs(inputs_, field_id, grid, t);
}

}  // namespace dnf
