#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnf/grid.hpp"

namespace dnf {

struct GaussianBump {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;

  double operator()(double x) const;
  bool operator==(const GaussianBump&) const = default;
};

/// A bump switched on over the half-open window [t_on, t_off).
struct ScheduledInput {
  GaussianBump bump;
  double t_on = 0.0;
  double t_off = 0.0;
  std::string target_field;

  bool active_at(double t) const { return t_on <= t && t < t_off; }
  void validate() const;
  bool operator==(const ScheduledInput&) const = default;
};

/// Sum of every input addressed to `field_id` and active at time t, sampled on
/// the grid. Inputs aimed at other fields are ignored.
std::vector<double> evaluate_inputs(std::span<const ScheduledInput> inputs, std::string_view field_id,
                                    const FieldGrid& grid, double t);

/// Input list bound to a known set of field identifiers.
class InputSchedule {
 public:
  /// Throws std::invalid_argument if an input targets a field not in `fields`.
  InputSchedule(std::vector<ScheduledInput> inputs, std::vector<std::string> fields);

  /// Throws std::invalid_argument for an unknown field_id.
  std::vector<double> evaluate(std::string_view field_id, const FieldGrid& grid, double t) const;

  const std::vector<ScheduledInput>& inputs() const { return inputs_; }

 private:
  std::vector<ScheduledInput> inputs_;
  std::vector<std::string> fields_;
};

}  // namespace dnf
