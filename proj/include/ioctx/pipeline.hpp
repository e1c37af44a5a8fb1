#pragma once

#include "ioctx/context.hpp"
#include "ioctx/dmo.hpp"
#include "ioctx/evaluation.hpp"
#include "ioctx/segmentation.hpp"
#include "ioctx/series_dataset.hpp"
#include "ioctx/signal.hpp"
#include "ioctx/tabular_dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ioctx {

enum class DatasetKind { window_dmo, bout_dmo, window_series, bout_series };
enum class ChannelKind { vertical, magnitude };
enum class LengthHandling { pad, resample, original };
enum class FoldKind { stratified, loso };

std::string_view to_string(DatasetKind d);
std::string_view to_string(ChannelKind c);
std::string_view to_string(LengthHandling l);
std::string_view to_string(FoldKind f);
DatasetKind parse_dataset_kind(std::string_view s);
ChannelKind parse_channel(std::string_view s);
LengthHandling parse_length_handling(std::string_view s);
FoldKind parse_fold_kind(std::string_view s);
bool is_series(DatasetKind d);

struct RunConfig {
  std::string data_dir = ".";
  std::string output_dir = ".";
  DatasetKind dataset = DatasetKind::window_dmo;
  int window_len_s = 60;
  ChannelKind channel = ChannelKind::vertical;
  std::string axis = "z";  // vertical axis of the sensor frame
  LengthHandling length = LengthHandling::pad;
  Normalization normalization = Normalization::none;
  ModelKind model = ModelKind::gnb;
  FoldKind folds = FoldKind::stratified;
  int k = 5;
  int knn_k = 5;
  std::size_t rocket_kernels = kRocketDefaultKernels;
  std::uint64_t seed = 0;
  int jobs = 1;

  // Sets one field from its text form; throws InvalidInput naming the key.
  void set(std::string_view key, std::string_view value);
  // Checks the dataset/model/length combination against the campaign grid.
  void validate() const;
  nlohmann::json to_json() const;
  ModelSpec model_spec() const;
  std::string campaign_id() const;
};

// Flat `key = value` lines; '#' starts a comment.
RunConfig read_run_config(std::istream& in, RunConfig base = {});
RunConfig read_run_config(const std::string& path, RunConfig base = {});

// Everything the pipeline derives from one subject's recordings.
struct SubjectArtifacts {
  InertialStream imu;
  std::vector<Window> windows;  // labeled
  std::vector<WalkingBout> bouts;
  std::vector<DmoRecord> bout_dmos;
};

struct SegmentOptions {
  int window_len_s = 60;
  std::string axis = "z";
  GaitHeuristicConfig gait{};
  int min_bout_epochs = 2;
  StepDetectionConfig steps{};
};

// Chunks, labels windows from the per-second stream, detects bouts (labeled
// with their window's context) and extracts bout DMOs.
SubjectArtifacts process_subject(InertialStream imu, const ContextLabelStream& labels, const SegmentOptions& opts = {});

// Labels windows only.
void label_windows(std::vector<Window>& windows, const ContextLabelStream& labels);

// DMOs for already known bouts.
std::vector<DmoRecord> compute_bout_dmos(const InertialStream& imu, const std::vector<Window>& windows,
                                         const std::vector<WalkingBout>& bouts, const SegmentOptions& opts = {});

// Staypoints and the per-second label stream covering the IMU recording.
ContextLabelStream label_recording(const GpsTrack& gps, double t0, int duration_s, const StaypointConfig& cfg = {});

// Dataset assembly. Only samples with a window label are kept.
TabularDataset build_window_dmo_dataset(const std::vector<SubjectArtifacts>& subjects);
TabularDataset build_bout_dmo_dataset(const std::vector<SubjectArtifacts>& subjects);
SeriesDataset build_window_series_dataset(const std::vector<SubjectArtifacts>& subjects, ChannelKind channel,
                                          const std::string& axis, LengthHandling length, int window_len_s);
SeriesDataset build_bout_series_dataset(const std::vector<SubjectArtifacts>& subjects, ChannelKind channel,
                                        const std::string& axis, LengthHandling length, int window_len_s);

FoldPlan make_fold_plan(const RunConfig& cfg, std::span<const Context> labels, std::span<const std::string> subjects);

// Builds the configured dataset and runs the campaign; the report's config
// carries the full RunConfig.
MetricsReport train_eval(const RunConfig& cfg, const std::vector<SubjectArtifacts>& subjects);

// ---------------------------------------------------------------------------
// On-disk layout shared by the CLI commands, one set of files per subject:
//   <id>_imu.csv  <id>_gps.csv  <id>_labels.csv  <id>_windows.csv
//   <id>_bouts.csv  <id>_bout_dmo.csv  <id>_window_dmo.csv

std::filesystem::path artifact_path(const std::filesystem::path& dir, const std::string& subject, std::string_view kind);

// Subjects with an IMU file in `dir`, sorted.
std::vector<std::string> list_subjects(const std::filesystem::path& dir);

// Reads IMU, window labels, bouts and bout DMOs written by segment/dmo.
SubjectArtifacts load_subject(const std::filesystem::path& dir, const std::string& subject, int window_len_s);

// Environment variable consulted for the default output directory.
inline constexpr const char* kOutDirEnv = "IOCTX_OUT_DIR";
std::string default_output_dir();

}  // namespace ioctx
