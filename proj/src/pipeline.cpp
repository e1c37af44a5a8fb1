#include "ioctx/pipeline.hpp"

#include "ioctx/csv.hpp"
#include "ioctx/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

namespace ioctx {

namespace {

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_from(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s, std::string_view field) {
  std::string options;
  for (const auto& [e, name] : table) {
    if (name == s) return e;
    options += (options.empty() ? "" : ", ") + std::string(name);
  }
  throw InvalidInput(fmt::format("{}: '{}' is not one of {}", field, s, options));
}

constexpr std::array<std::pair<DatasetKind, std::string_view>, 4> kDatasets{{
    {DatasetKind::window_dmo, "window-dmo"},
    {DatasetKind::bout_dmo, "bout-dmo"},
    {DatasetKind::window_series, "window-series"},
    {DatasetKind::bout_series, "bout-series"},
}};
constexpr std::array<std::pair<ChannelKind, std::string_view>, 2> kChannels{{
    {ChannelKind::vertical, "vertical"},
    {ChannelKind::magnitude, "magnitude"},
}};
constexpr std::array<std::pair<LengthHandling, std::string_view>, 3> kLengths{{
    {LengthHandling::pad, "pad"},
    {LengthHandling::resample, "resample"},
    {LengthHandling::original, "original"},
}};
constexpr std::array<std::pair<FoldKind, std::string_view>, 2> kFolds{{
    {FoldKind::stratified, "stratified"},
    {FoldKind::loso, "loso"},
}};

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw InvalidInput(fmt::format("{}: '{}' is not a valid number", key, value));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view to_string(DatasetKind d) { return name_of(kDatasets, d); }
std::string_view to_string(ChannelKind c) { return name_of(kChannels, c); }
std::string_view to_string(LengthHandling l) { return name_of(kLengths, l); }
std::string_view to_string(FoldKind f) { return name_of(kFolds, f); }
DatasetKind parse_dataset_kind(std::string_view s) { return parse_from(kDatasets, s, "dataset"); }
ChannelKind parse_channel(std::string_view s) { return parse_from(kChannels, s, "channel"); }
LengthHandling parse_length_handling(std::string_view s) { return parse_from(kLengths, s, "length"); }
FoldKind parse_fold_kind(std::string_view s) { return parse_from(kFolds, s, "folds"); }

bool is_series(DatasetKind d) { return d == DatasetKind::window_series || d == DatasetKind::bout_series; }

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "data_dir") data_dir = value;
  else if (key == "output_dir") output_dir = value;
  else if (key == "dataset") dataset = parse_dataset_kind(value);
  else if (key == "window_len_s") window_len_s = parse_number<int>(key, value);
  else if (key == "channel") channel = parse_channel(value);
  else if (key == "axis") axis = value;
  else if (key == "length") length = parse_length_handling(value);
  else if (key == "normalization") normalization = parse_normalization(value);
  else if (key == "model") model = parse_model_kind(value);
  else if (key == "folds") folds = parse_fold_kind(value);
  else if (key == "k") k = parse_number<int>(key, value);
  else if (key == "knn_k") knn_k = parse_number<int>(key, value);
  else if (key == "rocket_kernels") rocket_kernels = parse_number<std::size_t>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "jobs") jobs = parse_number<int>(key, value);
  else throw InvalidInput(fmt::format("config: unknown key '{}'", key));
}

void RunConfig::validate() const {
  if (window_len_s <= 0) throw InvalidInput("window_len_s: must be positive");
  if (k < 2) throw InvalidInput("k: must be at least 2");
  if (knn_k < 1) throw InvalidInput("knn_k: must be positive");
  if (jobs < 1) throw InvalidInput("jobs: must be positive");
  if (rocket_kernels == 0) throw InvalidInput("rocket_kernels: must be positive");
  parse_axis(axis);
  if (is_series(dataset) == is_tabular(model)) {
    throw InvalidInput(fmt::format("model: '{}' cannot run on the {} dataset", ioctx::to_string(model), ioctx::to_string(dataset)));
  }
  if (length == LengthHandling::original && is_series(dataset) && !accepts_variable_length(model)) {
    throw InvalidInput(fmt::format("length: '{}' needs equal-length series; use pad or resample", ioctx::to_string(model)));
  }
}

nlohmann::json RunConfig::to_json() const {
  return {{"data_dir", data_dir},
          {"output_dir", output_dir},
          {"dataset", ioctx::to_string(dataset)},
          {"window_len_s", window_len_s},
          {"channel", ioctx::to_string(channel)},
          {"axis", axis},
          {"length", ioctx::to_string(length)},
          {"normalization", ioctx::to_string(normalization)},
          {"model", ioctx::to_string(model)},
          {"folds", ioctx::to_string(folds)},
          {"k", k},
          {"knn_k", knn_k},
          {"rocket_kernels", rocket_kernels},
          {"seed", seed},
          {"jobs", jobs}};
}

ModelSpec RunConfig::model_spec() const {
  ModelSpec spec;
  spec.kind = model;
  spec.knn_k = knn_k;
  spec.rocket_kernels = rocket_kernels;
  spec.seed = seed;
  spec.jobs = jobs;
  return spec;
}

std::string RunConfig::campaign_id() const {
  if (!is_series(dataset)) return fmt::format("{}/{}", ioctx::to_string(model), ioctx::to_string(dataset));
  return fmt::format("{}/{}/{}/{}", ioctx::to_string(model), ioctx::to_string(dataset), ioctx::to_string(length),
                     ioctx::to_string(channel));
}

RunConfig read_run_config(std::istream& in, RunConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw InvalidInput(fmt::format("config line {}: expected key = value", line_no));
    base.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return base;
}

RunConfig read_run_config(const std::string& path, RunConfig base) {
  auto in = csv::open_input(path);
  return read_run_config(in, std::move(base));
}

// ---------------------------------------------------------------------------

void label_windows(std::vector<Window>& windows, const ContextLabelStream& labels) {
  for (auto& w : windows) {
    const auto wl = aggregate_window_label(w, labels);
    w.label = wl.label;
    w.label_confidence = wl.confidence;
  }
}

std::vector<DmoRecord> compute_bout_dmos(const InertialStream& imu, const std::vector<Window>& windows,
                                         const std::vector<WalkingBout>& bouts, const SegmentOptions& opts) {
  const auto channel = vertical_channel(imu, opts.axis);
  std::vector<DmoRecord> out;
  for (const auto& b : bouts) {
    const auto it = std::find_if(windows.begin(), windows.end(), [&](const Window& w) { return w.index == b.window_index; });
    if (it == windows.end()) throw InvalidInput(fmt::format("bout references unknown window {}", b.window_index));
    out.push_back(extract_basic_dmos(b, bout_slice(window_slice(channel, *it), b), imu.sample_rate_hz, opts.steps));
  }
  return out;
}

SubjectArtifacts process_subject(InertialStream imu, const ContextLabelStream& labels, const SegmentOptions& opts) {
  SubjectArtifacts out;
  out.windows = chunk_windows(imu, opts.window_len_s);
  label_windows(out.windows, labels);
  const auto channel = vertical_channel(imu, opts.axis);
  for (const auto& w : out.windows) {
    const auto epochs = detect_gait_epochs(w, window_slice(channel, w), imu.sample_rate_hz, opts.gait);
    for (auto& b : extract_bouts(w, epochs, opts.min_bout_epochs)) out.bouts.push_back(std::move(b));
  }
  out.bout_dmos = compute_bout_dmos(imu, out.windows, out.bouts, opts);
  out.imu = std::move(imu);
  return out;
}

ContextLabelStream label_recording(const GpsTrack& gps, double t0, int duration_s, const StaypointConfig& cfg) {
  const auto staypoints = detect_staypoints(gps, cfg.dist_threshold_m, cfg.time_threshold_s, cfg.gap_threshold_s);
  return label_stream(gps, staypoints, cfg.proximity_m, t0, duration_s);
}

// ---------------------------------------------------------------------------

namespace {

std::optional<Context> window_label(const SubjectArtifacts& s, int window_index) {
  for (const auto& w : s.windows) {
    if (w.index == window_index) return w.label;
  }
  return std::nullopt;
}

// DMO columns that carry a value somewhere in the data, in canonical order.
std::vector<std::size_t> present_features(const std::vector<const DmoValues*>& rows) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < kNumDmo; ++i) {
    if (std::any_of(rows.begin(), rows.end(), [&](const DmoValues* v) { return v->has(i); })) cols.push_back(i);
  }
  return cols;
}

TabularDataset to_tabular(const std::vector<const DmoValues*>& rows, std::vector<Context> y, std::vector<std::string> subjects) {
  TabularDataset out;
  const auto cols = present_features(rows);
  if (cols.empty()) throw InvalidInput("dmo dataset: no feature carries a value");
  out.X = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()),
                                    std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (rows[r]->has(cols[c])) out.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r]->values[cols[c]];
    }
  }
  for (auto c : cols) out.feature_names.emplace_back(kDmoNames[c]);
  out.y = std::move(y);
  out.subjects = std::move(subjects);
  return out;
}

UnivariateSeries channel_of(const InertialStream& imu, ChannelKind channel, const std::string& axis) {
  return channel == ChannelKind::magnitude ? magnitude_channel(imu) : vertical_channel(imu, axis);
}

UnivariateSeries shape_length(UnivariateSeries s, LengthHandling length, std::size_t target) {
  switch (length) {
    case LengthHandling::pad: return pad_to_length(s, target);
    case LengthHandling::resample: return resample_to_length(s, target);
    case LengthHandling::original: return s;
  }
  return s;
}

}  // namespace

TabularDataset build_window_dmo_dataset(const std::vector<SubjectArtifacts>& subjects) {
  std::vector<WindowDmo> windows;
  std::vector<Context> y;
  std::vector<std::string> ids;
  for (const auto& s : subjects) {
    for (auto& w : aggregate_all_windows(s.bout_dmos)) {
      const auto label = window_label(s, w.window_index);
      if (!label) continue;
      y.push_back(*label);
      ids.push_back(w.subject_id);
      windows.push_back(std::move(w));
    }
  }
  std::vector<const DmoValues*> rows;
  for (const auto& w : windows) rows.push_back(&w.features);
  return to_tabular(rows, std::move(y), std::move(ids));
}

TabularDataset build_bout_dmo_dataset(const std::vector<SubjectArtifacts>& subjects) {
  std::vector<const DmoValues*> rows;
  std::vector<Context> y;
  std::vector<std::string> ids;
  for (const auto& s : subjects) {
    for (const auto& r : s.bout_dmos) {
      const auto label = window_label(s, r.window_index);
      if (!label) continue;
      rows.push_back(&r.features);
      y.push_back(*label);
      ids.push_back(r.subject_id);
    }
  }
  return to_tabular(rows, std::move(y), std::move(ids));
}

SeriesDataset build_window_series_dataset(const std::vector<SubjectArtifacts>& subjects, ChannelKind channel,
                                          const std::string& axis, LengthHandling length, int window_len_s) {
  SeriesDataset out;
  for (const auto& s : subjects) {
    const auto ch = channel_of(s.imu, channel, axis);
    const auto target = static_cast<std::size_t>(std::llround(window_len_s * s.imu.sample_rate_hz));
    for (const auto& w : s.windows) {
      if (!w.label) continue;
      const auto slice = window_slice(ch, w);
      UnivariateSeries series({slice.begin(), slice.end()}, {s.imu.subject_id, w.index, -1});
      out.series.push_back(shape_length(std::move(series), length, target));
      out.y.push_back(*w.label);
      out.subjects.push_back(s.imu.subject_id);
    }
  }
  out.length_mode = length == LengthHandling::original ? LengthMode::variable : LengthMode::fixed;
  return out;
}

SeriesDataset build_bout_series_dataset(const std::vector<SubjectArtifacts>& subjects, ChannelKind channel,
                                        const std::string& axis, LengthHandling length, int window_len_s) {
  SeriesDataset out;
  for (const auto& s : subjects) {
    const auto ch = channel_of(s.imu, channel, axis);
    const auto target = static_cast<std::size_t>(std::llround(window_len_s * s.imu.sample_rate_hz));
    for (const auto& b : s.bouts) {
      const auto label = window_label(s, b.window_index);
      if (!label) continue;
      const auto wit = std::find_if(s.windows.begin(), s.windows.end(), [&](const Window& w) { return w.index == b.window_index; });
      const auto slice = bout_slice(window_slice(ch, *wit), b);
      UnivariateSeries series({slice.begin(), slice.end()}, {s.imu.subject_id, b.window_index, b.bout_index});
      out.series.push_back(shape_length(std::move(series), length, target));
      out.y.push_back(*label);
      out.subjects.push_back(s.imu.subject_id);
    }
  }
  out.length_mode = length == LengthHandling::original ? LengthMode::variable : LengthMode::fixed;
  return out;
}

FoldPlan make_fold_plan(const RunConfig& cfg, std::span<const Context> labels, std::span<const std::string> subjects) {
  if (cfg.folds == FoldKind::loso) return make_loso_folds(subjects, labels);
  return make_stratified_folds(labels, cfg.k, cfg.seed);
}

MetricsReport train_eval(const RunConfig& cfg, const std::vector<SubjectArtifacts>& subjects) {
  cfg.validate();
  MetricsReport report;
  if (is_series(cfg.dataset)) {
    const auto data = cfg.dataset == DatasetKind::window_series
                          ? build_window_series_dataset(subjects, cfg.channel, cfg.axis, cfg.length, cfg.window_len_s)
                          : build_bout_series_dataset(subjects, cfg.channel, cfg.axis, cfg.length, cfg.window_len_s);
    if (data.size() == 0) throw InvalidInput("dataset: no labeled samples");
    const auto plan = make_fold_plan(cfg, data.y, data.subjects);
    report = run_campaign(data, cfg.model_spec(), plan, cfg.normalization, cfg.campaign_id());
  } else {
    const auto data = cfg.dataset == DatasetKind::window_dmo ? build_window_dmo_dataset(subjects)
                                                             : build_bout_dmo_dataset(subjects);
    const auto plan = make_fold_plan(cfg, data.y, data.subjects);
    report = run_campaign(data, cfg.model_spec(), plan, cfg.normalization, cfg.campaign_id());
  }
  report.config["run"] = cfg.to_json();
  return report;
}

// ---------------------------------------------------------------------------

std::filesystem::path artifact_path(const std::filesystem::path& dir, const std::string& subject, std::string_view kind) {
  return dir / fmt::format("{}_{}.csv", subject, kind);
}

std::vector<std::string> list_subjects(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InvalidInput(fmt::format("data_dir: '{}' is not a directory", dir.string()));
  std::set<std::string> out;
  constexpr std::string_view suffix = "_imu.csv";
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.size() > suffix.size() && name.ends_with(suffix)) out.insert(name.substr(0, name.size() - suffix.size()));
  }
  return {out.begin(), out.end()};
}

SubjectArtifacts load_subject(const std::filesystem::path& dir, const std::string& subject, int window_len_s) {
  SubjectArtifacts out;
  out.imu = read_imu_csv(artifact_path(dir, subject, "imu").string(), subject);
  out.windows = chunk_windows(out.imu, window_len_s);

  auto win_in = csv::open_input(artifact_path(dir, subject, "windows").string());
  for (const auto& row : read_window_labels(win_in)) {
    if (row.subject_id != subject) continue;
    if (row.window_index < 0 || static_cast<std::size_t>(row.window_index) >= out.windows.size()) {
      throw InvalidInput(fmt::format("{}: window {} is outside the recording", subject, row.window_index));
    }
    auto& w = out.windows[static_cast<std::size_t>(row.window_index)];
    w.label = row.label;
    w.label_confidence = row.confidence;
  }
  out.bouts = import_bout_annotations(out.windows, artifact_path(dir, subject, "bouts").string());
  for (auto& b : out.bouts) b.label = out.windows[static_cast<std::size_t>(b.window_index)].label;

  const auto dmo_path = artifact_path(dir, subject, "bout_dmo");
  if (std::filesystem::exists(dmo_path)) {
    for (auto& r : import_dmo_table(dmo_path.string())) {
      if (r.subject_id == subject) out.bout_dmos.push_back(std::move(r));
    }
  }
  return out;
}

std::string default_output_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

}  // namespace ioctx
