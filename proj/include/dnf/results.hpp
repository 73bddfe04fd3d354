#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dnf/orchestrator.hpp"

namespace dnf {

struct MetricsRow {
  std::string trial_label;
  std::optional<double> peak_position;
  std::optional<double> threshold_onset;
  std::optional<double> shift_from_baseline;
};

/// What gets written for one experiment. Heatmaps and trajectories are taken
/// from the trial results when present.
struct ResultBundle {
  std::vector<MetricsRow> metrics;
  std::vector<TrialResult> trials;
};

ResultBundle make_bundle(const ExperimentResult& experiment);

/// Fixed-point text with 9 digits after the decimal point; "NA" for missing.
std::string format_value(double v);
std::string format_value(const std::optional<double>& v);

std::string metrics_table(const ResultBundle& bundle);
std::string matrix_text(const Matrix& m);
std::string trajectory_table(const std::vector<TimePoint>& points);

/// Writes metrics.csv, one heatmap per recorded layer per trial
/// (heatmap_<NN>_<label>_<layer>.txt) and one trajectory per trial that has
/// one (trajectory_<NN>_<label>.csv). Returns the files written, in order.
/// I/O failures throw std::runtime_error naming the path.
std::vector<std::filesystem::path> write_results(const ResultBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace dnf
