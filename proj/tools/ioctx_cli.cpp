// Command-line front end. Commands exchange CSV files in a data directory
// (default: $IOCTX_OUT_DIR or the current directory).

#include "ioctx/context.hpp"
#include "ioctx/csv.hpp"
#include "ioctx/dmo.hpp"
#include "ioctx/error.hpp"
#include "ioctx/pipeline.hpp"
#include "ioctx/report.hpp"
#include "ioctx/segmentation.hpp"
#include "ioctx/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace ioctx;

namespace {

std::vector<std::string> selected_subjects(const fs::path& dir, const std::string& only) {
  auto subjects = list_subjects(dir);
  if (!only.empty()) {
    if (std::find(subjects.begin(), subjects.end(), only) == subjects.end()) {
      throw InvalidInput(fmt::format("subject: no {}_imu.csv in '{}'", only, dir.string()));
    }
    subjects = {only};
  }
  if (subjects.empty()) throw InvalidInput(fmt::format("data_dir: no *_imu.csv files in '{}'", dir.string()));
  return subjects;
}

int cmd_synth(const fs::path& out, std::uint64_t seed, int subjects, int duration, const std::string& preset,
              double outdoor_fraction) {
  ScenarioConfig cfg = preset == "skewed" ? skewed_cohort_config(seed) : ScenarioConfig{};
  cfg.seed = seed;
  cfg.duration_s = duration;
  if (preset != "skewed") {
    cfg.n_subjects = subjects;
    cfg.outdoor_fraction = {outdoor_fraction};
  }
  fs::create_directories(out);
  for (const auto& sc : generate_scenario(cfg)) {
    write_imu_csv(artifact_path(out, sc.subject_id, "imu").string(), sc.imu);
    write_gps_csv(artifact_path(out, sc.subject_id, "gps").string(), sc.gps);
    write_label_csv(artifact_path(out, sc.subject_id, "truth").string(), sc.truth);
    double outdoor = 0;
    for (double p : sc.truth.probs) outdoor += 1 - p;
    fmt::print("{}: {} s, {} fixes, {} planted bouts, outdoor share {:.3f}\n", sc.subject_id, sc.truth.probs.size(),
               sc.gps.points.size(), sc.bouts.size(), outdoor / static_cast<double>(sc.truth.probs.size()));
  }
  return 0;
}

int cmd_label(const fs::path& dir, const std::string& only, const StaypointConfig& sp) {
  for (const auto& s : selected_subjects(dir, only)) {
    const auto imu = read_imu_csv(artifact_path(dir, s, "imu").string(), s);
    const auto gps = read_gps_csv(artifact_path(dir, s, "gps").string(), s);
    const auto duration = static_cast<int>(std::floor(imu.duration_s()));
    const auto labels = label_recording(gps, imu.start_time, duration, sp);
    write_label_csv(artifact_path(dir, s, "labels").string(), labels);
    double indoor = 0;
    for (double p : labels.probs) indoor += p;
    fmt::print("{}: {} s labeled, indoor share {:.3f}\n", s, labels.probs.size(),
               labels.probs.empty() ? 0.0 : indoor / static_cast<double>(labels.probs.size()));
  }
  return 0;
}

int cmd_segment(const fs::path& dir, const std::string& only, const SegmentOptions& opts, const std::string& bouts_file) {
  for (const auto& s : selected_subjects(dir, only)) {
    auto imu = read_imu_csv(artifact_path(dir, s, "imu").string(), s);
    const auto labels = read_label_csv(artifact_path(dir, s, "labels").string(), s);
    std::vector<Window> windows;
    std::vector<WalkingBout> bouts;
    if (bouts_file.empty()) {
      auto art = process_subject(std::move(imu), labels, opts);
      windows = std::move(art.windows);
      bouts = std::move(art.bouts);
    } else {
      windows = chunk_windows(imu, opts.window_len_s);
      label_windows(windows, labels);
      for (auto& b : import_bout_annotations(windows, bouts_file)) {
        if (b.subject_id == s) bouts.push_back(std::move(b));
      }
    }
    auto win_out = csv::open_output(artifact_path(dir, s, "windows").string());
    write_window_labels(win_out, windows);
    auto bout_out = csv::open_output(artifact_path(dir, s, "bouts").string());
    write_bout_annotations(bout_out, bouts);

    std::size_t labeled = 0;
    for (const auto& w : windows) labeled += w.label.has_value();
    std::set<int> gait_windows;
    for (const auto& b : bouts) gait_windows.insert(b.window_index);
    fmt::print("{}: {} windows, {} labeled, {} with gait, {} bouts\n", s, windows.size(), labeled, gait_windows.size(),
               bouts.size());
  }
  return 0;
}

int cmd_dmo(const fs::path& dir, const std::string& only, const SegmentOptions& opts) {
  for (const auto& s : selected_subjects(dir, only)) {
    const auto art = load_subject(dir, s, opts.window_len_s);
    const auto records = compute_bout_dmos(art.imu, art.windows, art.bouts, opts);
    auto bout_out = csv::open_output(artifact_path(dir, s, "bout_dmo").string());
    write_dmo_table(bout_out, records);
    const auto windows = aggregate_all_windows(records);
    auto win_out = csv::open_output(artifact_path(dir, s, "window_dmo").string());
    write_window_dmo_table(win_out, windows);
    fmt::print("{}: {} bout rows, {} window rows\n", s, records.size(), windows.size());
  }
  return 0;
}

std::string file_stem_for(const std::string& campaign_id) {
  std::string out = campaign_id;
  std::replace(out.begin(), out.end(), '/', '_');
  return out;
}

int cmd_train_eval(const RunConfig& cfg, bool show_folds) {
  cfg.validate();
  std::vector<SubjectArtifacts> subjects;
  for (const auto& s : selected_subjects(cfg.data_dir, "")) subjects.push_back(load_subject(cfg.data_dir, s, cfg.window_len_s));
  const auto report = train_eval(cfg, subjects);
  fs::create_directories(cfg.output_dir);
  const auto stem = fs::path(cfg.output_dir) / file_stem_for(report.campaign_id);
  write_report(stem.string() + ".json", report);
  const auto table = render_table({report});
  auto table_out = csv::open_output(stem.string() + ".txt");
  table_out << table;
  fmt::print("{}", table);
  if (show_folds) fmt::print("\n{}", render_folds(report));
  fmt::print("report: {}.json\n", stem.string());
  return 0;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& title, bool show_folds) {
  std::vector<MetricsReport> reports;
  for (const auto& p : paths) reports.push_back(read_report(p));
  fmt::print("{}", render_table(reports, title));
  if (show_folds) {
    for (const auto& r : reports) fmt::print("\n{}\n{}", r.campaign_id, render_folds(r));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor/outdoor context classification from wearable gait data"};
  app.require_subcommand(1);
  const std::string default_dir = default_output_dir();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic cohort (IMU, GPS, ground truth)");
  std::string synth_out = default_dir;
  std::uint64_t synth_seed = 1;
  int synth_subjects = 9;
  int synth_duration = 1800;
  std::string synth_preset = "skewed";
  double synth_outdoor = 0.25;
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--seed", synth_seed, "Master seed");
  synth->add_option("--subjects", synth_subjects, "Number of subjects (uniform preset)")->check(CLI::PositiveNumber);
  synth->add_option("--duration", synth_duration, "Seconds per subject")->check(CLI::PositiveNumber);
  synth->add_option("--preset", synth_preset, "skewed or uniform")->check(CLI::IsMember({"skewed", "uniform"}));
  synth->add_option("--outdoor-fraction", synth_outdoor, "Outdoor share (uniform preset)")->check(CLI::Range(0.0, 1.0));

  // label
  auto* label = app.add_subcommand("label", "Per-second indoor/outdoor labels from GPS staypoints");
  std::string label_dir = default_dir;
  std::string label_subject;
  StaypointConfig sp;
  label->add_option("--data-dir", label_dir, "Directory with <id>_imu.csv and <id>_gps.csv");
  label->add_option("--subject", label_subject, "Process one subject only");
  label->add_option("--dist", sp.dist_threshold_m, "Staypoint distance threshold (m)");
  label->add_option("--time", sp.time_threshold_s, "Staypoint minimum duration (s)");
  label->add_option("--gap", sp.gap_threshold_s, "GPS silence treated as a dwell (s)");
  label->add_option("--proximity", sp.proximity_m, "Indoor proximity to a staypoint (m)");

  // segment
  auto* segment = app.add_subcommand("segment", "Windows, window labels and walking bouts");
  std::string seg_dir = default_dir;
  std::string seg_subject;
  std::string seg_bouts;
  SegmentOptions seg_opts;
  segment->add_option("--data-dir", seg_dir, "Directory with <id>_imu.csv and <id>_labels.csv");
  segment->add_option("--subject", seg_subject, "Process one subject only");
  segment->add_option("--window-len", seg_opts.window_len_s, "Window length (s)")->check(CLI::PositiveNumber);
  segment->add_option("--axis", seg_opts.axis, "Vertical axis (x, y or z)");
  segment->add_option("--bouts", seg_bouts, "Import bout annotations instead of detecting them")->check(CLI::ExistingFile);

  // dmo
  auto* dmo = app.add_subcommand("dmo", "Bout and window DMO tables");
  std::string dmo_dir = default_dir;
  std::string dmo_subject;
  SegmentOptions dmo_opts;
  dmo->add_option("--data-dir", dmo_dir, "Directory with segmented subjects");
  dmo->add_option("--subject", dmo_subject, "Process one subject only");
  dmo->add_option("--window-len", dmo_opts.window_len_s, "Window length (s)")->check(CLI::PositiveNumber);
  dmo->add_option("--axis", dmo_opts.axis, "Vertical axis (x, y or z)");

  // train-eval
  auto* train = app.add_subcommand("train-eval", "Cross-validated campaign on one dataset");
  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool train_folds = false;
  train->add_option("--config", config_path, "Flat key = value run configuration")->check(CLI::ExistingFile);
  for (const char* key : {"data_dir", "output_dir", "dataset", "window_len_s", "channel", "axis", "length",
                          "normalization", "model", "folds", "k", "knn_k", "rocket_kernels", "seed", "jobs"}) {
    std::string flag = std::string("--") + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    train->add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; },
                                            fmt::format("Overrides '{}'", key));
  }
  train->add_flag("--show-folds", train_folds, "Print the per-fold breakdown");

  // report
  auto* report = app.add_subcommand("report", "Render report JSON files as a table");
  std::vector<std::string> report_paths;
  std::string report_title;
  bool report_folds = false;
  report->add_option("reports", report_paths, "Report JSON files")->required()->check(CLI::ExistingFile);
  report->add_option("--title", report_title, "Table title");
  report->add_flag("--show-folds", report_folds, "Print per-fold breakdowns");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return cmd_synth(synth_out, synth_seed, synth_subjects, synth_duration, synth_preset, synth_outdoor);
    if (*label) return cmd_label(label_dir, label_subject, sp);
    if (*segment) return cmd_segment(seg_dir, seg_subject, seg_opts, seg_bouts);
    if (*dmo) return cmd_dmo(dmo_dir, dmo_subject, dmo_opts);
    if (*train) {
      RunConfig cfg;
      cfg.data_dir = default_dir;
      cfg.output_dir = default_dir;
      if (!config_path.empty()) cfg = read_run_config(config_path, cfg);
      for (const auto& [k, v] : overrides) cfg.set(k, v);
      return cmd_train_eval(cfg, train_folds);
    }
    if (*report) return cmd_report(report_paths, report_title, report_folds);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
