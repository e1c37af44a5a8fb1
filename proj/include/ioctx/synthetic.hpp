#pragma once

#include "ioctx/context.hpp"
#include "ioctx/signal.hpp"
#include "ioctx/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ioctx {

// Gait and signal parameters for one context. Accelerations are in g.
struct GaitProfile {
  double cadence_min_hz = 1.5;  // step frequency range, drawn per bout
  double cadence_max_hz = 2.1;
  double amplitude_g = 0.25;    // vertical sinusoid amplitude
  double harmonic = 0.2;        // second harmonic, relative to amplitude
  double noise_frac = 0.02;     // gaussian noise sigma, relative to amplitude
  double drift_g = 0.0;         // low-frequency drift amplitude while walking
  double gait_window_prob = 0.8;  // chance that a minute contains walking
  double bout_min_s = 12.0;
  double bout_max_s = 45.0;
};

struct ScenarioConfig {
  int n_subjects = 9;
  int duration_s = 1800;
  // Share of each subject's time spent outdoors; a single value applies to all.
  std::vector<double> outdoor_fraction{0.25};
  int episode_unit_s = 60;  // episode boundaries fall on multiples of this
  double sample_rate_hz = 100.0;
  GaitProfile indoor{};
  GaitProfile outdoor{1.6, 2.2, 0.25, 0.35, 0.1, 0.06, 1.0, 20.0, 50.0};
  double rest_noise_g = 0.005;
  double gps_noise_m = 3.0;
  double walking_speed_mps = 1.3;
  // Indoor dwells long enough to form a staypoint keep reporting fixes with
  // this probability; the rest are GPS-silent. Off by default: the labeling
  // tier reads the first and last ~40 s of walking around such a dwell as
  // indoor, since the subject is still inside the staypoint radius.
  double stationary_indoor_prob = 0.0;
  int stationary_fix_interval_s = 5;
  double start_time = 1700000000.0;
  std::uint64_t seed = 1;

  // Throws InvalidInput naming the offending field.
  void validate() const;
  double outdoor_fraction_for(int subject) const;
};

// Nine subjects whose outdoor shares follow a skewed, free-living-like
// distribution: one subject entirely outdoors, several entirely indoors,
// about a quarter of all time outdoors.
ScenarioConfig skewed_cohort_config(std::uint64_t seed = 1);

struct Episode {
  Context context = Context::indoor;
  int start_s = 0;  // offset from the stream start
  int end_s = 0;    // exclusive
  bool gps_silent = false;
};

struct PlantedBout {
  std::size_t start_sample = 0;  // stream offset
  std::size_t end_sample = 0;    // exclusive
  Context context = Context::indoor;
  double cadence_hz = 0.0;
  int steps = 0;  // sinusoid maxima inside the bout
};

struct SubjectScenario {
  std::string subject_id;
  InertialStream imu;
  GpsTrack gps;
  ContextLabelStream truth;  // per-second ground truth, 1 = indoor
  std::vector<Episode> episodes;
  std::vector<PlantedBout> bouts;
};

// Deterministic for a fixed config; every subject draws from its own
// sub-stream of the master seed, so subjects are independent of each other.
std::vector<SubjectScenario> generate_scenario(const ScenarioConfig& cfg);
SubjectScenario generate_subject(const ScenarioConfig& cfg, int subject);

// Vertical gait signal for one bout; exposed for the step-count property.
std::vector<double> synth_gait_signal(std::size_t n, double sample_rate_hz, double cadence_hz, double amplitude_g,
                                      double harmonic, double noise_sigma, std::uint64_t seed, int* planted_steps);

std::string subject_name(int subject);  // "S01", "S02", ...

}  // namespace ioctx
