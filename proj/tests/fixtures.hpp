#pragma once

#include <string>
#include <vector>

#include "dnf/coupling.hpp"
#include "dnf/inputs.hpp"
#include "dnf/orchestrator.hpp"

namespace fixture {

// Perception -> planning <- memory, planning gated. Small enough to run fast.
inline dnf::ModelSpec three_layer(double c_p = 1.2, double c_m = 1.0, long long n = 201) {
  dnf::ModelSpec m;
  m.grid = dnf::FieldGrid(-10, 10, n);
  dnf::FieldSpec pe;
  pe.tau = 10;
  pe.h = -1;
  pe.kernel = dnf::KernelParams{3, 1.0, 2, 3.0, 0};
  dnf::FieldSpec pl;
  pl.tau = 5;
  pl.h = -2;
  pl.kernel = dnf::KernelParams{6, 0.7, 6, 2.5, 0.05};
  m.fields = {{"perception", pe}, {"planning", pl}};
  m.memories = {{"memory", dnf::MemorySpec{10, 60, dnf::KernelParams{1, 1.0, 0, 1, 0}, "planning"}}};
  m.edges = {{"perception", "planning", c_p}, {"memory", "planning", c_m}};
  m.gated_fields = {"planning"};
  return m;
}

inline dnf::ScheduledInput input(double a, double c, double w, double on, double off, std::string field) {
  return dnf::ScheduledInput{dnf::GaussianBump{a, c, w}, on, off, std::move(field)};
}

inline dnf::ScheduledInput percept() { return input(8, 1, 1, 0, 100, "perception"); }
inline dnf::ScheduledInput response() { return input(3, 3, 4, 100, 200, "planning"); }

// Baseline, ten shadowing trials, washout.
inline std::vector<dnf::TrialSpec> shadowing_schedule() {
  std::vector<dnf::TrialSpec> s;
  s.push_back({"BL", {response()}, 200, std::nullopt});
  for (int i = 1; i <= 10; ++i) s.push_back({"S" + std::to_string(i), {percept(), response()}, 200, std::nullopt});
  s.push_back({"WO", {response()}, 200, std::nullopt});
  return s;
}

}  // namespace fixture
