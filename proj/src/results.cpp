#include "dnf/results.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace dnf {

namespace {

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    out += (std::isalnum(uc) != 0 || c == '-' || c == '_') ? c : '_';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

ResultBundle make_bundle(const ExperimentResult& experiment) {
  ResultBundle bundle;
  for (std::size_t i = 0; i < experiment.trials.size(); ++i) {
    const auto& t = experiment.trials[i];
    bundle.metrics.push_back({t.label, t.peak_position, t.threshold_onset, experiment.shift_from_baseline(i)});
  }
  bundle.trials = experiment.trials;
  return bundle;
}

std::string format_value(double v) {
  // Avoid "-0.000000000" so tiny negative noise does not change the text.
  std::string s = fmt::format("{:.9f}", v);
  if (s == "-0.000000000") s.erase(0, 1);
  return s;
}

std::string format_value(const std::optional<double>& v) { return v ? format_value(*v) : std::string("NA"); }

std::string metrics_table(const ResultBundle& bundle) {
  std::string out = "trial_label,peak_position,threshold_onset,shift_from_baseline\n";
  for (const auto& row : bundle.metrics) {
    out += fmt::format("{},{},{},{}\n", row.trial_label, format_value(row.peak_position),
                       format_value(row.threshold_onset), format_value(row.shift_from_baseline));
  }
  return out;
}

std::string matrix_text(const Matrix& m) {
  std::string out;
  out.reserve(m.rows * m.cols * 14);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != 0) out += ' ';
      out += format_value(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string trajectory_table(const std::vector<TimePoint>& points) {
  std::string out = "t,x_tv\n";
  for (const auto& p : points) out += format_value(p.t) + "," + format_value(p.x) + "\n";
  return out;
}

std::vector<std::filesystem::path> write_results(const ResultBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto metrics_path = out_dir / "metrics.csv";
  write_file(metrics_path, metrics_table(bundle));
  written.push_back(metrics_path);

  for (std::size_t i = 0; i < bundle.trials.size(); ++i) {
    const auto& t = bundle.trials[i];
    const std::string stem = fmt::format("{:02}_{}", i, safe_name(t.label));
    for (const auto& [layer, matrix] : t.field_history) {
      const auto p = out_dir / fmt::format("heatmap_{}_{}.txt", stem, safe_name(layer));
      write_file(p, matrix_text(matrix));
      written.push_back(p);
    }
    if (!t.tract_trajectory.empty()) {
      const auto p = out_dir / fmt::format("trajectory_{}.csv", stem);
      write_file(p, trajectory_table(t.tract_trajectory));
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace dnf
