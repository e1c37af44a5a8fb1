#include "ioctx/segmentation.hpp"

#include "ioctx/csv.hpp"
#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

namespace ioctx {

std::span<const double> window_slice(const UnivariateSeries& channel, const Window& window) {
  if (window.start_sample + window.length > channel.size()) {
    throw InvalidInput(fmt::format("window {} extends past the end of the channel", window.index));
  }
  return channel.values().subspan(window.start_sample, window.length);
}

std::vector<Window> chunk_windows(const InertialStream& stream, int window_len_s) {
  if (window_len_s <= 0) throw InvalidInput("window length must be positive");
  if (!(stream.sample_rate_hz > 0)) throw InvalidInput("sample rate must be positive");
  const auto per_window = static_cast<std::size_t>(std::llround(window_len_s * stream.sample_rate_hz));
  std::vector<Window> out;
  if (per_window == 0) return out;
  const std::size_t count = stream.size() / per_window;
  out.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    Window win;
    win.subject_id = stream.subject_id;
    win.index = static_cast<int>(w);
    win.start_sample = w * per_window;
    win.length = per_window;
    win.start_time = stream.start_time + static_cast<double>(win.start_sample) / stream.sample_rate_hz;
    win.duration_s = window_len_s;
    out.push_back(std::move(win));
  }
  return out;
}

WindowLabel aggregate_window_label(const Window& window, const ContextLabelStream& labels) {
  WindowLabel out;
  const double offset = window.start_time - labels.t0;
  const long long first = std::llround(offset);
  if (std::abs(offset - static_cast<double>(first)) > 1e-3 || first < 0 ||
      first + window.duration_s > static_cast<long long>(labels.probs.size()) || window.duration_s <= 0) {
    out.missing_coverage = true;
    return out;
  }
  std::map<double, int> counts;
  for (int s = 0; s < window.duration_s; ++s) ++counts[labels.probs[static_cast<std::size_t>(first + s)]];

  double mode = 0.0;
  int best = -1;
  int runner_up = -1;
  for (const auto& [value, count] : counts) {
    if (count > best) {
      runner_up = best;
      best = count;
      mode = value;
    } else if (count > runner_up) {
      runner_up = count;
    }
  }
  out.confidence = static_cast<double>(best) / window.duration_s;
  if (best == runner_up) return out;
  out.label = mode > 0.5 ? Context::indoor : Context::outdoor;
  return out;
}

double normalized_autocorrelation(std::span<const double> x, std::size_t lag) {
  const std::size_t n = x.size();
  if (lag >= n) return 0.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double energy = 0.0;
  for (double v : x) energy += (v - mean) * (v - mean);
  if (energy <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) acc += (x[t] - mean) * (x[t + lag] - mean);
  return (acc / static_cast<double>(n - lag)) / (energy / static_cast<double>(n));
}

namespace {

struct Periodicity {
  double score = 0.0;
  bool found = false;
};

Periodicity dominant_in_band_peak(std::span<const double> x, double rate, const GaitHeuristicConfig& cfg) {
  const std::size_t n = x.size();
  const auto lag_min = static_cast<std::size_t>(std::max(1.0, std::ceil(rate / cfg.f_max)));
  const auto lag_max = std::min(static_cast<std::size_t>(std::floor(rate / cfg.f_min)), n >= 3 ? n - 2 : 0);
  Periodicity best;
  if (lag_min > lag_max) return best;
  std::vector<double> r(lag_max + 2, 0.0);
  for (std::size_t l = lag_min - 1; l <= lag_max + 1 && l < n; ++l) r[l] = normalized_autocorrelation(x, l);
  for (std::size_t l = lag_min; l <= lag_max; ++l) {
    const double prev = r[l - 1];
    const double next = l + 1 < n ? r[l + 1] : -std::numeric_limits<double>::infinity();
    if (r[l] > prev && r[l] >= next && (!best.found || r[l] > best.score)) {
      best.score = r[l];
      best.found = true;
    }
  }
  return best;
}

double stddev(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n);
}

}  // namespace

std::vector<Epoch> detect_gait_epochs(const Window& window, std::span<const double> channel, double sample_rate_hz,
                                      const GaitHeuristicConfig& cfg) {
  const auto epoch_len = static_cast<std::size_t>(std::llround(cfg.epoch_s * sample_rate_hz));
  if (epoch_len == 0) throw InvalidInput("epoch length must be positive");
  std::vector<Epoch> out;
  for (std::size_t off = 0; off + epoch_len <= channel.size(); off += epoch_len) {
    const auto x = channel.subspan(off, epoch_len);
    const auto peak = dominant_in_band_peak(x, sample_rate_hz, cfg);
    Epoch e;
    e.window_index = window.index;
    e.offset = off;
    e.length = epoch_len;
    e.score = peak.found ? peak.score : 0.0;
    e.is_gait = stddev(x) >= cfg.energy_min && peak.found && peak.score >= cfg.periodicity_min;
    out.push_back(e);
  }
  return out;
}

std::span<const double> bout_slice(std::span<const double> window_channel, const WalkingBout& bout) {
  if (bout.end_sample > window_channel.size() || bout.start_sample >= bout.end_sample) {
    throw InvalidInput("bout range lies outside its window");
  }
  return window_channel.subspan(bout.start_sample, bout.length());
}

std::vector<WalkingBout> extract_bouts(const Window& window, const std::vector<Epoch>& epochs, int min_bout_epochs) {
  if (min_bout_epochs <= 0) throw InvalidInput("min_bout_epochs must be positive");
  std::vector<WalkingBout> out;
  std::size_t i = 0;
  while (i < epochs.size()) {
    if (!epochs[i].is_gait) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < epochs.size() && epochs[j + 1].is_gait) ++j;
    if (static_cast<int>(j - i + 1) >= min_bout_epochs) {
      WalkingBout b;
      b.subject_id = window.subject_id;
      b.window_index = window.index;
      b.bout_index = static_cast<int>(out.size());
      b.start_sample = epochs[i].offset;
      b.end_sample = epochs[j].offset + epochs[j].length;
      b.label = window.label;
      out.push_back(std::move(b));
    }
    i = j + 1;
  }
  return out;
}

std::vector<WalkingBout> import_bout_annotations(const std::vector<Window>& windows, std::istream& in) {
  std::map<std::pair<std::string, int>, const Window*> index;
  for (const auto& w : windows) index[{w.subject_id, w.index}] = &w;

  csv::Reader reader(in);
  reader.expect_header({"subject", "window_index", "start_sample", "end_sample"});
  struct Row {
    WalkingBout bout;
    std::size_t row;
  };
  std::vector<Row> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto window_index = reader.integer(f, 1);
    const auto start = reader.integer(f, 2);
    const auto end = reader.integer(f, 3);
    const auto it = index.find({f[0], static_cast<int>(window_index)});
    if (it == index.end()) {
      throw InvalidInput(fmt::format("bout csv: row {} references unknown window ({}, {})", reader.row(), f[0],
                                     window_index));
    }
    const Window& w = *it->second;
    if (start < 0 || end <= start || end > static_cast<long long>(w.length)) {
      throw InvalidInput(fmt::format("bout csv: row {} has an invalid sample range [{}, {}) for a {}-sample window",
                                     reader.row(), start, end, w.length));
    }
    WalkingBout b;
    b.subject_id = w.subject_id;
    b.window_index = w.index;
    b.start_sample = static_cast<std::size_t>(start);
    b.end_sample = static_cast<std::size_t>(end);
    b.label = w.label;
    rows.push_back({std::move(b), reader.row()});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.bout.subject_id, a.bout.window_index, a.bout.start_sample) <
           std::tie(b.bout.subject_id, b.bout.window_index, b.bout.start_sample);
  });
  std::vector<WalkingBout> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& b = rows[i].bout;
    if (!out.empty() && out.back().subject_id == b.subject_id && out.back().window_index == b.window_index) {
      if (b.start_sample < out.back().end_sample) {
        throw InvalidInput(fmt::format("bout csv: row {} overlaps another bout in window {}", rows[i].row,
                                       b.window_index));
      }
      b.bout_index = out.back().bout_index + 1;
    } else {
      b.bout_index = 0;
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<WalkingBout> import_bout_annotations(const std::vector<Window>& windows, const std::string& path) {
  auto in = csv::open_input(path);
  return import_bout_annotations(windows, in);
}

void write_bout_annotations(std::ostream& out, const std::vector<WalkingBout>& bouts) {
  out << "subject,window_index,start_sample,end_sample\n";
  for (const auto& b : bouts) out << fmt::format("{},{},{},{}\n", b.subject_id, b.window_index, b.start_sample, b.end_sample);
}

void write_window_labels(std::ostream& out, const std::vector<Window>& windows) {
  out << "subject,window_index,label,confidence\n";
  for (const auto& w : windows) {
    out << fmt::format("{},{},{},{:.6f}\n", w.subject_id, w.index, w.label ? to_string(*w.label) : "none",
                       w.label_confidence);
  }
}

std::vector<WindowLabelRow> read_window_labels(std::istream& in) {
  csv::Reader reader(in);
  reader.expect_header({"subject", "window_index", "label", "confidence"});
  std::vector<WindowLabelRow> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    WindowLabelRow r;
    r.subject_id = f[0];
    r.window_index = static_cast<int>(reader.integer(f, 1));
    if (f[2] != "none") r.label = parse_context(f[2]);
    r.confidence = reader.number(f, 3);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ioctx
