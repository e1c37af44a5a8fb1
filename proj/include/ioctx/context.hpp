#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ioctx {

struct GpsPoint {
  double t = 0.0;  // epoch seconds
  double lat = 0.0;
  double lon = 0.0;
};

struct GpsTrack {
  std::string subject_id;
  std::vector<GpsPoint> points;

  // Strictly increasing timestamps and coordinates in range; throws InvalidInput.
  void validate() const;
};

enum class StaypointSource { cluster, gps_gap };

struct Staypoint {
  double lat = 0.0;
  double lon = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  StaypointSource source = StaypointSource::cluster;

  bool contains(double t) const { return t >= t_start && t <= t_end; }
};

// Per-second probability that the subject is indoors (1) or outdoors (0).
struct ContextLabelStream {
  std::string subject_id;
  double t0 = 0.0;
  std::vector<double> probs;
};

struct StaypointConfig {
  double dist_threshold_m = 50.0;
  double time_threshold_s = 300.0;
  double gap_threshold_s = 60.0;
  double proximity_m = 50.0;
};

inline constexpr double kEarthRadius_m = 6371000.0;

double haversine_m(double lat1, double lon1, double lat2, double lon2);

// Cluster staypoints come from maximal runs of consecutive fixes that stay
// within dist_threshold_m of their running centroid for at least
// time_threshold_s. Runs never span a silent gap; each inter-fix gap longer
// than gap_threshold_s becomes a gps_gap staypoint anchored at the fix before
// it. Output is chronological.
std::vector<Staypoint> detect_staypoints(const GpsTrack& track, double dist_threshold_m, double time_threshold_s,
                                         double gap_threshold_s);

// One value per second starting at t0. A second is indoor when it falls in a
// gps_gap staypoint, when its linearly interpolated position is within
// proximity_m of a staypoint active at that time, or when no position exists.
ContextLabelStream label_stream(const GpsTrack& track, const std::vector<Staypoint>& staypoints,
                                double proximity_m, double t0, int duration_s);

GpsTrack read_gps_csv(std::istream& in, std::string subject_id);
GpsTrack read_gps_csv(const std::string& path, std::string subject_id);
void write_gps_csv(std::ostream& out, const GpsTrack& track);
void write_gps_csv(const std::string& path, const GpsTrack& track);

// `t,p_indoor` at 1 Hz.
void write_label_csv(std::ostream& out, const ContextLabelStream& labels);
void write_label_csv(const std::string& path, const ContextLabelStream& labels);
ContextLabelStream read_label_csv(std::istream& in, std::string subject_id);
ContextLabelStream read_label_csv(const std::string& path, std::string subject_id);

}  // namespace ioctx
