#include "ioctx/report.hpp"

#include "ioctx/csv.hpp"
#include "ioctx/error.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <fmt/format.h>

namespace ioctx {

std::string format_mean_std(const MetricStats& s) { return fmt::format("{:.1f} ± {:.1f}", 100 * s.mean, 100 * s.std); }

namespace {

// Display width; "±" is one column but two bytes.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string layout(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const auto& cell = rows[r][c];
      const std::string pad(widths[c] - width(cell), ' ');
      // First column left-aligned, numbers right-aligned.
      line += c == 0 ? cell + pad : "  " + pad + cell;
    }
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : widths) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out;
}

}  // namespace

std::string render_table(const std::vector<MetricsReport>& reports, const std::string& title) {
  std::vector<std::vector<std::string>> rows{{"Model", "Accuracy", "Precision", "Recall", "F1-score"}};
  for (const auto& r : reports) {
    rows.push_back({r.campaign_id, format_mean_std(r.accuracy), format_mean_std(r.precision), format_mean_std(r.recall),
                    format_mean_std(r.f1)});
  }
  return (title.empty() ? std::string{} : title + "\n") + layout(rows);
}

std::string render_folds(const MetricsReport& report) {
  std::vector<std::vector<std::string>> rows{{"Fold", "n_test", "Accuracy", "Precision", "Recall", "F1-score", "Flags"}};
  for (const auto& f : report.folds) {
    std::string flags = f.degenerate ? "degenerate" : "";
    for (const auto& flag : f.metrics.flags) flags += (flags.empty() ? "" : " ") + flag;
    rows.push_back({f.key, std::to_string(f.test_size), fmt::format("{:.3f}", f.metrics.accuracy),
                    fmt::format("{:.3f}", f.metrics.precision), fmt::format("{:.3f}", f.metrics.recall),
                    fmt::format("{:.3f}", f.metrics.f1), flags});
  }
  return layout(rows);
}

MetricsReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open report '{}'", path));
  try {
    return MetricsReport::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(fmt::format("report '{}': {}", path, e.what()));
  }
}

void write_report(const std::string& path, const MetricsReport& report) {
  auto out = csv::open_output(path);
  out << report.to_json().dump(2) << "\n";
}

}  // namespace ioctx
