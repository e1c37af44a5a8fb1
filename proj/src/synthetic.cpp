#include "ioctx/synthetic.hpp"

#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

namespace ioctx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_profile(const GaitProfile& p, const char* name) {
  auto fail = [&](const char* field) { throw InvalidInput(fmt::format("scenario: {}.{} is out of range", name, field)); };
  if (!(p.cadence_min_hz >= 0.5 && p.cadence_max_hz <= 3.0 && p.cadence_min_hz <= p.cadence_max_hz)) fail("cadence");
  if (!(p.amplitude_g > 0)) fail("amplitude_g");
  if (!(p.harmonic >= 0 && p.harmonic <= 0.4)) fail("harmonic");
  if (!(p.noise_frac >= 0)) fail("noise_frac");
  if (!(p.drift_g >= 0)) fail("drift_g");
  if (!(p.gait_window_prob >= 0 && p.gait_window_prob <= 1)) fail("gait_window_prob");
  if (!(p.bout_min_s >= 6 && p.bout_min_s <= p.bout_max_s)) fail("bout_min_s");
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Splits `total` into `parts` positive integers.
std::vector<int> composition(std::mt19937_64& rng, int total, int parts) {
  std::vector<int> cuts;
  std::vector<int> positions(static_cast<std::size_t>(total - 1));
  for (int i = 0; i < total - 1; ++i) positions[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(positions.begin(), positions.end(), rng);
  cuts.assign(positions.begin(), positions.begin() + parts - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> out;
  int prev = 0;
  for (int c : cuts) {
    out.push_back(c - prev);
    prev = c;
  }
  out.push_back(total - prev);
  return out;
}

// Alternating episodes in whole units. Interior indoor episodes last at
// least two units so that a silent dwell is always longer than a minute.
std::vector<Episode> make_schedule(std::mt19937_64& rng, int units, int unit_s, double outdoor_fraction) {
  const int outdoor = static_cast<int>(std::lround(outdoor_fraction * units));
  const int indoor = units - outdoor;
  std::vector<Episode> out;
  if (outdoor == 0 || indoor == 0) {
    out.push_back({outdoor == 0 ? Context::indoor : Context::outdoor, 0, units * unit_s, outdoor == 0});
    return out;
  }
  int m = std::max(1, static_cast<int>(std::lround(outdoor / 4.0)));
  m = std::min({m, outdoor, indoor / 2 + 1});
  const auto outdoor_parts = composition(rng, outdoor, m);

  // m + 1 indoor slots: before, between, after. Interior slots get 2 units first.
  std::vector<int> indoor_parts(static_cast<std::size_t>(m + 1), 0);
  int remaining = indoor;
  for (int s = 1; s < m; ++s) {
    indoor_parts[static_cast<std::size_t>(s)] = 2;
    remaining -= 2;
  }
  std::uniform_int_distribution<int> slot(0, m);
  for (int r = 0; r < remaining; ++r) ++indoor_parts[static_cast<std::size_t>(slot(rng))];

  int t = 0;
  for (int s = 0; s <= m; ++s) {
    if (indoor_parts[static_cast<std::size_t>(s)] > 0) {
      const int len = indoor_parts[static_cast<std::size_t>(s)] * unit_s;
      out.push_back({Context::indoor, t, t + len, true});
      t += len;
    }
    if (s < m) {
      const int len = outdoor_parts[static_cast<std::size_t>(s)] * unit_s;
      out.push_back({Context::outdoor, t, t + len, false});
      t += len;
    }
  }
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_subjects < 1) throw InvalidInput("scenario: n_subjects must be positive");
  if (episode_unit_s < 10) throw InvalidInput("scenario: episode_unit_s must be at least 10");
  if (duration_s < episode_unit_s || duration_s % episode_unit_s != 0) {
    throw InvalidInput("scenario: duration_s must be a positive multiple of episode_unit_s");
  }
  if (outdoor_fraction.empty() ||
      (outdoor_fraction.size() != 1 && outdoor_fraction.size() != static_cast<std::size_t>(n_subjects))) {
    throw InvalidInput("scenario: outdoor_fraction needs one value or one per subject");
  }
  for (double f : outdoor_fraction) {
    if (!(f >= 0 && f <= 1)) throw InvalidInput("scenario: outdoor_fraction values must lie in [0, 1]");
  }
  if (!(sample_rate_hz > 0)) throw InvalidInput("scenario: sample_rate_hz must be positive");
  check_profile(indoor, "indoor");
  check_profile(outdoor, "outdoor");
  if (std::max(indoor.bout_max_s, outdoor.bout_max_s) > episode_unit_s - 2) {
    throw InvalidInput("scenario: bout_max_s must fit inside one episode unit");
  }
  if (!(rest_noise_g >= 0)) throw InvalidInput("scenario: rest_noise_g must be non-negative");
  if (!(gps_noise_m >= 0)) throw InvalidInput("scenario: gps_noise_m must be non-negative");
  if (!(walking_speed_mps > 0)) throw InvalidInput("scenario: walking_speed_mps must be positive");
  if (!(stationary_indoor_prob >= 0 && stationary_indoor_prob <= 1)) {
    throw InvalidInput("scenario: stationary_indoor_prob must lie in [0, 1]");
  }
  if (stationary_fix_interval_s < 1 || stationary_fix_interval_s > 30) {
    throw InvalidInput("scenario: stationary_fix_interval_s must lie in [1, 30]");
  }
}

double ScenarioConfig::outdoor_fraction_for(int subject) const {
  return outdoor_fraction.size() == 1 ? outdoor_fraction[0] : outdoor_fraction.at(static_cast<std::size_t>(subject));
}

ScenarioConfig skewed_cohort_config(std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.outdoor_fraction = {0.05, 0.5, 1.0, 0.2, 0.0, 0.0, 0.05, 0.45, 0.0};
  return cfg;
}

std::string subject_name(int subject) { return fmt::format("S{:02d}", subject + 1); }

std::vector<double> synth_gait_signal(std::size_t n, double sample_rate_hz, double cadence_hz, double amplitude_g,
                                      double harmonic, double noise_sigma, std::uint64_t seed, int* planted_steps) {
  std::mt19937_64 rng(seed);
  const double phase0 = uniform(rng, 0.0, 2 * std::numbers::pi);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0 ? noise_sigma : 1.0);
  std::vector<double> clean(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = 2 * std::numbers::pi * cadence_hz * static_cast<double>(i) / sample_rate_hz + phase0;
    clean[i] = amplitude_g * (std::sin(phi) + harmonic * std::sin(2 * phi));
  }
  if (planted_steps) {
    int steps = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (clean[i] > clean[i - 1] && clean[i] >= clean[i + 1]) ++steps;
    }
    *planted_steps = steps;
  }
  if (noise_sigma > 0) {
    for (auto& v : clean) v += noise(rng);
  }
  return clean;
}

SubjectScenario generate_subject(const ScenarioConfig& cfg, int subject) {
  cfg.validate();
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(subject) + 1)));

  SubjectScenario sc;
  sc.subject_id = subject_name(subject);
  const int units = cfg.duration_s / cfg.episode_unit_s;
  sc.episodes = make_schedule(rng, units, cfg.episode_unit_s, cfg.outdoor_fraction_for(subject));

  const double min_stationary_s = 420.0;
  for (auto& e : sc.episodes) {
    if (e.context == Context::indoor && e.end_s - e.start_s >= min_stationary_s) {
      e.gps_silent = uniform(rng, 0, 1) >= cfg.stationary_indoor_prob;
    }
  }

  sc.truth.subject_id = sc.subject_id;
  sc.truth.t0 = cfg.start_time;
  sc.truth.probs.assign(static_cast<std::size_t>(cfg.duration_s), 1.0);
  for (const auto& e : sc.episodes) {
    for (int s = e.start_s; s < e.end_s; ++s) sc.truth.probs[static_cast<std::size_t>(s)] = class_index(e.context);
  }

  // IMU: quiet baseline, then planted bouts.
  const double rate = cfg.sample_rate_hz;
  const auto n_samples = static_cast<std::size_t>(std::llround(cfg.duration_s * rate));
  sc.imu.subject_id = sc.subject_id;
  sc.imu.sample_rate_hz = rate;
  sc.imu.start_time = cfg.start_time;
  sc.imu.samples.resize(n_samples);
  std::normal_distribution<double> rest(0.0, cfg.rest_noise_g > 0 ? cfg.rest_noise_g : 1.0);
  const double rest_scale = cfg.rest_noise_g > 0 ? 1.0 : 0.0;
  for (auto& a : sc.imu.samples) {
    a.x = rest_scale * rest(rng);
    a.y = rest_scale * rest(rng);
    a.z = 1.0 + rest_scale * rest(rng);
  }

  const double subject_cadence_offset = uniform(rng, -0.1, 0.1);
  const double subject_amplitude = uniform(rng, 0.9, 1.1);
  std::vector<char> walking(static_cast<std::size_t>(cfg.duration_s), 0);

  for (const auto& e : sc.episodes) {
    const auto& prof = e.context == Context::indoor ? cfg.indoor : cfg.outdoor;
    for (int unit = e.start_s; unit < e.end_s; unit += cfg.episode_unit_s) {
      // Outdoor episodes start and end on foot: the subject walks out of and
      // into buildings.
      const bool leaving = e.context == Context::outdoor && unit == e.start_s;
      const bool arriving = e.context == Context::outdoor && unit + cfg.episode_unit_s == e.end_s;
      if (uniform(rng, 0, 1) >= prof.gait_window_prob && !leaving && !arriving) continue;
      const double usable = cfg.episode_unit_s - 2.0;
      std::vector<double> lengths{uniform(rng, prof.bout_min_s, prof.bout_max_s)};
      if (uniform(rng, 0, 1) < 0.4) {
        const double second = uniform(rng, prof.bout_min_s, prof.bout_max_s);
        if (lengths[0] + second + 3.0 <= usable) lengths.push_back(second);
      }
      double free = usable - (lengths.size() - 1) * 3.0;
      for (double l : lengths) free -= l;
      std::vector<double> slack;
      for (std::size_t b = 0; b < lengths.size(); ++b) slack.push_back(uniform(rng, 0, free));
      std::sort(slack.begin(), slack.end());
      if (leaving) {
        slack.front() = 0.0;
      } else if (arriving) {
        slack.back() = free;
      }
      double cursor = unit + 1.0;
      for (std::size_t b = 0; b < lengths.size(); ++b) {
        cursor += (b == 0 ? slack[0] : 3.0 + slack[b] - slack[b - 1]);
        const auto start = static_cast<std::size_t>(std::llround(cursor * rate));
        const auto len = static_cast<std::size_t>(std::llround(lengths[b] * rate));
        const double cadence = std::clamp(uniform(rng, prof.cadence_min_hz, prof.cadence_max_hz) + subject_cadence_offset,
                                          0.5, 3.0);
        const double amp = prof.amplitude_g * subject_amplitude * uniform(rng, 0.85, 1.15);
        int steps = 0;
        const auto vertical = synth_gait_signal(len, rate, cadence, amp, prof.harmonic, prof.noise_frac * amp, rng(), &steps);
        const double drift_f = uniform(rng, 0.1, 0.3);
        const double drift_phase = uniform(rng, 0, 2 * std::numbers::pi);
        const double sway_phase = uniform(rng, 0, 2 * std::numbers::pi);
        std::normal_distribution<double> lateral(0.0, std::max(1e-12, prof.noise_frac * amp));
        for (std::size_t i = 0; i < len; ++i) {
          const double t = static_cast<double>(i) / rate;
          auto& a = sc.imu.samples[start + i];
          a.z += vertical[i] + prof.drift_g * std::sin(2 * std::numbers::pi * drift_f * t + drift_phase);
          a.x += 0.3 * amp * std::sin(std::numbers::pi * cadence * t + sway_phase) + lateral(rng);
          a.y += 0.15 * amp * std::sin(2 * std::numbers::pi * cadence * t + sway_phase) + lateral(rng);
        }
        sc.bouts.push_back({start, start + len, e.context, cadence, steps});
        for (auto s = static_cast<std::size_t>(cursor); s < static_cast<std::size_t>(cursor + lengths[b]); ++s) {
          walking[s] = 1;
        }
        cursor += lengths[b];
      }
    }
  }

  // GPS on a local tangent plane around a per-subject origin.
  sc.gps.subject_id = sc.subject_id;
  const double lat0 = 45.0 + 0.01 * subject;
  const double lon0 = 7.6 + 0.01 * subject;
  const double deg = 180.0 / std::numbers::pi;
  const double cos_lat = std::cos(lat0 / deg);
  std::normal_distribution<double> gps_noise(0.0, cfg.gps_noise_m > 0 ? cfg.gps_noise_m : 1.0);
  const double gps_scale = cfg.gps_noise_m > 0 ? 1.0 : 0.0;
  double px = 0.0, py = 0.0;
  double heading = uniform(rng, 0, 2 * std::numbers::pi);
  std::normal_distribution<double> turn(0.0, 0.05);
  auto emit = [&](int s) {
    const double ex = px + gps_scale * gps_noise(rng);
    const double ey = py + gps_scale * gps_noise(rng);
    sc.gps.points.push_back({cfg.start_time + s, lat0 + ey / kEarthRadius_m * deg,
                             lon0 + ex / (kEarthRadius_m * cos_lat) * deg});
  };
  for (const auto& e : sc.episodes) {
    if (e.context == Context::outdoor) {
      for (int s = e.start_s; s < e.end_s; ++s) {
        emit(s);
        if (walking[static_cast<std::size_t>(s)]) {
          heading += turn(rng);
          px += cfg.walking_speed_mps * std::cos(heading);
          py += cfg.walking_speed_mps * std::sin(heading);
        }
      }
    } else if (!e.gps_silent) {
      for (int s = e.start_s; s < e.end_s; s += cfg.stationary_fix_interval_s) emit(s);
    }
  }
  return sc;
}

std::vector<SubjectScenario> generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<SubjectScenario> out;
  for (int s = 0; s < cfg.n_subjects; ++s) out.push_back(generate_subject(cfg, s));
  return out;
}

}  // namespace ioctx
