#include "ioctx/dmo.hpp"

#include "ioctx/csv.hpp"
#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace ioctx {

std::optional<std::size_t> dmo_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumDmo; ++i) {
    if (kDmoNames[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> detect_steps(std::span<const double> x, double sample_rate_hz,
                                      const StepDetectionConfig& cfg) {
  const std::size_t n = x.size();
  std::vector<std::size_t> peaks;
  if (n < 3) return peaks;

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(n));
  if (sigma == 0.0) return peaks;

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  const auto half = static_cast<std::size_t>(std::llround(cfg.rolling_window_s * sample_rate_hz / 2.0));

  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    const double rolling = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    if (x[i] > rolling + cfg.k_sigma * sigma) candidates.push_back(i);
  }

  // Keep the tallest peak within every min_distance neighborhood.
  const auto min_distance = static_cast<std::size_t>(std::llround(cfg.min_peak_distance_s * sample_rate_hz));
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[candidates[a]] > x[candidates[b]]; });
  std::vector<bool> removed(candidates.size(), false);
  for (std::size_t o : order) {
    if (removed[o]) continue;
    peaks.push_back(candidates[o]);
    for (std::size_t k = o; k-- > 0 && candidates[o] - candidates[k] < min_distance;) removed[k] = true;
    for (std::size_t k = o + 1; k < candidates.size() && candidates[k] - candidates[o] < min_distance; ++k) {
      removed[k] = true;
    }
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

DmoRecord extract_basic_dmos(const WalkingBout& bout, std::span<const double> bout_channel, double sample_rate_hz,
                             const StepDetectionConfig& cfg) {
  if (bout_channel.empty()) throw InvalidInput("bout channel is empty");
  DmoRecord rec;
  rec.subject_id = bout.subject_id;
  rec.window_index = bout.window_index;
  rec.bout_index = bout.bout_index;
  rec.duration_s = static_cast<double>(bout_channel.size()) / sample_rate_hz;

  const auto peaks = detect_steps(bout_channel, sample_rate_hz, cfg);
  const double steps = static_cast<double>(peaks.size());
  rec.features.set(Dmo::number_of_steps, steps);
  rec.features.set(Dmo::cadence, 60.0 * steps / rec.duration_s);
  if (peaks.size() < 2) return rec;

  std::vector<double> intervals;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    intervals.push_back(static_cast<double>(peaks[i] - peaks[i - 1]) / sample_rate_hz);
  }
  const double mean_all = std::accumulate(intervals.begin(), intervals.end(), 0.0) / static_cast<double>(intervals.size());
  rec.features.set(Dmo::step_duration, mean_all);
  if (intervals.size() >= 2) {
    double even = 0.0, odd = 0.0;
    std::size_t n_even = 0, n_odd = 0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (i % 2 == 0) {
        even += intervals[i];
        ++n_even;
      } else {
        odd += intervals[i];
        ++n_odd;
      }
    }
    rec.features.set(Dmo::step_duration_asymmetry,
                     std::abs(odd / static_cast<double>(n_odd) - even / static_cast<double>(n_even)) / mean_all);
  }
  return rec;
}

std::vector<DmoRecord> import_dmo_table(std::istream& in) {
  csv::Reader reader(in);
  const auto& header = reader.header();
  if (header.size() < 3 || header[0] != "subject" || header[1] != "window_index" || header[2] != "bout_index") {
    throw InvalidInput("dmo csv: header must start with subject,window_index,bout_index");
  }
  std::vector<std::size_t> feature_of_column(header.size(), kNumDmo);
  std::vector<bool> seen(kNumDmo, false);
  for (std::size_t c = 3; c < header.size(); ++c) {
    const auto idx = dmo_index(header[c]);
    if (!idx) throw InvalidInput(fmt::format("dmo csv: unknown column `{}`", header[c]));
    if (seen[*idx]) throw InvalidInput(fmt::format("dmo csv: duplicate column `{}`", header[c]));
    seen[*idx] = true;
    feature_of_column[c] = *idx;
  }
  std::vector<DmoRecord> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    DmoRecord rec;
    rec.subject_id = f[0];
    rec.window_index = static_cast<int>(reader.integer(f, 1));
    rec.bout_index = static_cast<int>(reader.integer(f, 2));
    for (std::size_t c = 3; c < f.size(); ++c) {
      if (f[c].empty()) continue;
      const double v = reader.number(f, c);
      if (v < 0.0) {
        throw InvalidInput(fmt::format("dmo csv: row {} column `{}` is negative ({})", reader.row(), header[c], v));
      }
      rec.features.set(feature_of_column[c], v);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<DmoRecord> import_dmo_table(const std::string& path) {
  auto in = csv::open_input(path);
  return import_dmo_table(in);
}

namespace {

std::string feature_cells(const DmoValues& v) {
  std::string out;
  for (std::size_t i = 0; i < kNumDmo; ++i) {
    out += ',';
    if (v.has(i)) out += csv::format_number(v.values[i]);
  }
  return out;
}

std::string feature_header() {
  std::string out;
  for (auto name : kDmoNames) {
    out += ',';
    out += name;
  }
  return out;
}

}  // namespace

void write_dmo_table(std::ostream& out, const std::vector<DmoRecord>& records) {
  out << "subject,window_index,bout_index" << feature_header() << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{}", r.subject_id, r.window_index, r.bout_index) << feature_cells(r.features) << '\n';
  }
}

WindowDmo aggregate_window_dmos(std::span<const DmoRecord> records) {
  if (records.empty()) throw InvalidInput("cannot aggregate an empty set of bout records");
  WindowDmo out;
  out.subject_id = records.front().subject_id;
  out.window_index = records.front().window_index;
  out.n_bouts = static_cast<int>(records.size());
  for (const auto& r : records) {
    if (r.subject_id != out.subject_id || r.window_index != out.window_index) {
      throw InvalidInput("aggregated bout records must reference the same window");
    }
  }
  constexpr auto steps = static_cast<std::size_t>(Dmo::number_of_steps);
  for (std::size_t i = 0; i < kNumDmo; ++i) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : records) {
      if (!r.features.has(i)) continue;
      sum += r.features.values[i];
      ++count;
    }
    if (count == 0) continue;
    out.features.set(i, i == steps ? sum : sum / count);
  }
  return out;
}

std::vector<WindowDmo> aggregate_all_windows(const std::vector<DmoRecord>& records) {
  std::map<std::pair<std::string, int>, std::size_t> slot;
  std::vector<std::vector<DmoRecord>> groups;
  for (const auto& r : records) {
    auto [it, inserted] = slot.try_emplace({r.subject_id, r.window_index}, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(r);
  }
  std::vector<WindowDmo> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(aggregate_window_dmos(g));
  return out;
}

void write_window_dmo_table(std::ostream& out, const std::vector<WindowDmo>& windows) {
  out << "subject,window_index,n_bouts" << feature_header() << '\n';
  for (const auto& w : windows) {
    out << fmt::format("{},{},{}", w.subject_id, w.window_index, w.n_bouts) << feature_cells(w.features) << '\n';
  }
}

}  // namespace ioctx
