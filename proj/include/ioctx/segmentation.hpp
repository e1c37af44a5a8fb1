#pragma once

#include "ioctx/context.hpp"
#include "ioctx/signal.hpp"
#include "ioctx/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ioctx {

// Fixed-length, non-overlapping chunk of a stream.
struct Window {
  std::string subject_id;
  int index = 0;
  std::size_t start_sample = 0;  // offset into the stream
  std::size_t length = 0;        // samples
  double start_time = 0.0;       // epoch seconds
  int duration_s = 0;
  std::optional<Context> label;
  double label_confidence = 0.0;
};

// Samples of `channel` (a whole-stream channel) covered by the window.
std::span<const double> window_slice(const UnivariateSeries& channel, const Window& window);

// floor(n / window_samples) windows; the trailing remainder is dropped.
std::vector<Window> chunk_windows(const InertialStream& stream, int window_len_s);

struct WindowLabel {
  std::optional<Context> label;
  double confidence = 0.0;
  bool missing_coverage = false;
};

// Majority vote over the per-second probabilities inside the window. The most
// frequent value wins and maps to indoor when > 0.5; a frequency tie between
// the top two values leaves the window unlabeled.
WindowLabel aggregate_window_label(const Window& window, const ContextLabelStream& labels);

struct GaitHeuristicConfig {
  double epoch_s = 3.0;
  double energy_min = 0.05;       // minimum epoch standard deviation
  double f_min = 0.5;             // Hz
  double f_max = 3.0;             // Hz
  double periodicity_min = 0.4;   // minimum normalized autocorrelation at the peak
};

struct Epoch {
  int window_index = 0;
  std::size_t offset = 0;  // sample offset inside the window
  std::size_t length = 0;
  bool is_gait = false;
  double score = 0.0;  // normalized autocorrelation of the dominant in-band peak
};

// Autocorrelation of `x` at `lag` over the overlapping pairs, divided by the
// lag-0 value. Both use the whole-series mean.
double normalized_autocorrelation(std::span<const double> x, std::size_t lag);

// Splits the window channel into epochs and flags each one as gait when it has
// enough energy and a dominant periodicity inside [f_min, f_max].
std::vector<Epoch> detect_gait_epochs(const Window& window, std::span<const double> channel, double sample_rate_hz,
                                      const GaitHeuristicConfig& cfg = {});

struct WalkingBout {
  std::string subject_id;
  int window_index = 0;
  int bout_index = 0;
  std::size_t start_sample = 0;  // relative to the window
  std::size_t end_sample = 0;    // exclusive
  std::optional<Context> label;

  std::size_t length() const { return end_sample - start_sample; }
};

std::span<const double> bout_slice(std::span<const double> window_channel, const WalkingBout& bout);

// Maximal runs of at least min_bout_epochs consecutive gait epochs.
std::vector<WalkingBout> extract_bouts(const Window& window, const std::vector<Epoch>& epochs,
                                       int min_bout_epochs = 2);

// `subject,window_index,start_sample,end_sample`. Rows must reference a known
// window and lie inside it; bouts in one window must not overlap.
std::vector<WalkingBout> import_bout_annotations(const std::vector<Window>& windows, std::istream& in);
std::vector<WalkingBout> import_bout_annotations(const std::vector<Window>& windows, const std::string& path);
void write_bout_annotations(std::ostream& out, const std::vector<WalkingBout>& bouts);

// `subject,window_index,label,confidence` with label indoor/outdoor/none.
void write_window_labels(std::ostream& out, const std::vector<Window>& windows);
struct WindowLabelRow {
  std::string subject_id;
  int window_index = 0;
  std::optional<Context> label;
  double confidence = 0.0;
};
std::vector<WindowLabelRow> read_window_labels(std::istream& in);

}  // namespace ioctx
