#pragma once

#include "ioctx/segmentation.hpp"

#include <array>
#include <bitset>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ioctx {

// Digital mobility outcomes, in canonical column order.
inline constexpr std::array<std::string_view, 20> kDmoNames = {
    "number_of_steps",
    "step_duration",
    "step_duration_asymmetry",
    "step_length",
    "step_length_asymmetry",
    "stride_length",
    "stride_length_asymmetry",
    "stride_duration",
    "stride_duration_asymmetry",
    "cadence",
    "initial_double_support",
    "terminal_double_support",
    "double_support_asymmetry",
    "single_limb_support",
    "single_limb_support_asymmetry",
    "stance",
    "stance_asymmetry",
    "swing",
    "swing_asymmetry",
    "gait_speed",
};
inline constexpr std::size_t kNumDmo = kDmoNames.size();

enum class Dmo : std::size_t {
  number_of_steps = 0,
  step_duration = 1,
  step_duration_asymmetry = 2,
  cadence = 9,
  gait_speed = 19,
};

// Index into kDmoNames, or nullopt for an unknown name.
std::optional<std::size_t> dmo_index(std::string_view name);

// Feature values with a per-feature availability mask.
struct DmoValues {
  std::array<double, kNumDmo> values{};
  std::bitset<kNumDmo> available;

  bool has(std::size_t i) const { return available.test(i); }
  bool has(Dmo d) const { return has(static_cast<std::size_t>(d)); }
  double get(Dmo d) const { return values[static_cast<std::size_t>(d)]; }
  void set(std::size_t i, double v) {
    values[i] = v;
    available.set(i);
  }
  void set(Dmo d, double v) { set(static_cast<std::size_t>(d), v); }
};

struct DmoRecord {
  std::string subject_id;
  int window_index = 0;
  int bout_index = 0;
  double duration_s = 0.0;  // bout duration; 0 when imported without it
  DmoValues features;
};

struct WindowDmo {
  std::string subject_id;
  int window_index = 0;
  int n_bouts = 0;
  DmoValues features;
};

struct StepDetectionConfig {
  double rolling_window_s = 1.0;    // centered rolling-mean window
  double k_sigma = 0.5;             // threshold = rolling mean + k * bout std
  double min_peak_distance_s = 0.25;
};

// Peak sample indices accepted as steps, ascending.
std::vector<std::size_t> detect_steps(std::span<const double> channel, double sample_rate_hz,
                                      const StepDetectionConfig& cfg = {});

// Steps, step duration, step duration asymmetry, and cadence from the bout's
// vertical channel. Every other feature is left unavailable.
DmoRecord extract_basic_dmos(const WalkingBout& bout, std::span<const double> bout_channel, double sample_rate_hz,
                             const StepDetectionConfig& cfg = {});

// `subject,window_index,bout_index,<features...>` where features are any subset
// of kDmoNames. Empty cells are unavailable; negative values are rejected.
std::vector<DmoRecord> import_dmo_table(std::istream& in);
std::vector<DmoRecord> import_dmo_table(const std::string& path);
// Writes every feature column; unavailable cells are left empty.
void write_dmo_table(std::ostream& out, const std::vector<DmoRecord>& records);

// Steps are summed, every other available feature is averaged over the bouts
// that carry it. All records must belong to the same window.
WindowDmo aggregate_window_dmos(std::span<const DmoRecord> records);

// Groups records by (subject, window) in first-seen order and aggregates each group.
std::vector<WindowDmo> aggregate_all_windows(const std::vector<DmoRecord>& records);

// `subject,window_index,n_bouts,<features...>`.
void write_window_dmo_table(std::ostream& out, const std::vector<WindowDmo>& windows);

}  // namespace ioctx
