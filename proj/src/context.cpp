#include "ioctx/context.hpp"

#include "ioctx/csv.hpp"
#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

namespace ioctx {

void GpsTrack::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0)) {
      throw InvalidInput(fmt::format("gps point {} has out-of-range coordinates ({}, {})", i, p.lat, p.lon));
    }
    if (i > 0 && !(p.t > points[i - 1].t)) {
      throw InvalidInput(fmt::format("gps point {} does not advance in time", i));
    }
  }
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * deg;
  const double dlon = (lon2 - lon1) * deg;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * deg) * std::cos(lat2 * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadius_m * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<Staypoint> detect_staypoints(const GpsTrack& track, double dist_threshold_m, double time_threshold_s,
                                         double gap_threshold_s) {
  if (!(dist_threshold_m > 0) || !(time_threshold_s > 0) || !(gap_threshold_s > 0)) {
    throw InvalidInput("staypoint thresholds must be positive");
  }
  track.validate();
  const auto& pts = track.points;
  std::vector<Staypoint> out;
  if (pts.size() < 2) return out;

  // Segments of fixes with no silent gap inside.
  std::size_t seg_begin = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const bool gap_after = k + 1 < pts.size() && pts[k + 1].t - pts[k].t > gap_threshold_s;
    if (!gap_after && k + 1 < pts.size()) continue;

    std::size_t i = seg_begin;
    while (i <= k) {
      double sum_lat = pts[i].lat;
      double sum_lon = pts[i].lon;
      std::size_t j = i + 1;
      for (; j <= k; ++j) {
        const double n = static_cast<double>(j - i);
        if (haversine_m(pts[j].lat, pts[j].lon, sum_lat / n, sum_lon / n) > dist_threshold_m) break;
        sum_lat += pts[j].lat;
        sum_lon += pts[j].lon;
      }
      const std::size_t last = j - 1;
      if (pts[last].t - pts[i].t >= time_threshold_s) {
        const double n = static_cast<double>(j - i);
        out.push_back({sum_lat / n, sum_lon / n, pts[i].t, pts[last].t, StaypointSource::cluster});
        i = j;
      } else {
        ++i;
      }
    }
    if (gap_after) {
      out.push_back({pts[k].lat, pts[k].lon, pts[k].t, pts[k + 1].t, StaypointSource::gps_gap});
    }
    seg_begin = k + 1;
  }
  std::stable_sort(out.begin(), out.end(), [](const Staypoint& a, const Staypoint& b) { return a.t_start < b.t_start; });
  return out;
}

ContextLabelStream label_stream(const GpsTrack& track, const std::vector<Staypoint>& staypoints,
                                double proximity_m, double t0, int duration_s) {
  if (duration_s <= 0) throw InvalidInput("label duration must be positive");
  const auto& pts = track.points;
  ContextLabelStream out{track.subject_id, t0, std::vector<double>(static_cast<std::size_t>(duration_s), 1.0)};
  for (int s = 0; s < duration_s; ++s) {
    const double t = t0 + s;
    const bool in_gap = std::any_of(staypoints.begin(), staypoints.end(), [&](const Staypoint& sp) {
      return sp.source == StaypointSource::gps_gap && sp.contains(t);
    });
    if (in_gap) continue;
    if (pts.empty() || t < pts.front().t || t > pts.back().t) continue;  // no position: indoor

    auto hi = std::lower_bound(pts.begin(), pts.end(), t, [](const GpsPoint& p, double v) { return p.t < v; });
    double lat = hi->lat;
    double lon = hi->lon;
    if (hi->t != t) {
      const auto lo = hi - 1;
      const double w = (t - lo->t) / (hi->t - lo->t);
      lat = lo->lat + w * (hi->lat - lo->lat);
      lon = lo->lon + w * (hi->lon - lo->lon);
    }
    const bool near = std::any_of(staypoints.begin(), staypoints.end(), [&](const Staypoint& sp) {
      return sp.contains(t) && haversine_m(lat, lon, sp.lat, sp.lon) <= proximity_m;
    });
    out.probs[static_cast<std::size_t>(s)] = near ? 1.0 : 0.0;
  }
  return out;
}

GpsTrack read_gps_csv(std::istream& in, std::string subject_id) {
  csv::Reader reader(in);
  reader.expect_header({"t", "lat", "lon"});
  GpsTrack track{std::move(subject_id), {}};
  std::vector<std::string> f;
  while (reader.next(f)) track.points.push_back({reader.number(f, 0), reader.number(f, 1), reader.number(f, 2)});
  track.validate();
  return track;
}

GpsTrack read_gps_csv(const std::string& path, std::string subject_id) {
  auto in = csv::open_input(path);
  return read_gps_csv(in, std::move(subject_id));
}

void write_gps_csv(std::ostream& out, const GpsTrack& track) {
  out << "t,lat,lon\n";
  for (const auto& p : track.points) out << fmt::format("{:.3f},{:.7f},{:.7f}\n", p.t, p.lat, p.lon);
}

void write_gps_csv(const std::string& path, const GpsTrack& track) {
  auto out = csv::open_output(path);
  write_gps_csv(out, track);
}

void write_label_csv(std::ostream& out, const ContextLabelStream& labels) {
  out << "t,p_indoor\n";
  for (std::size_t s = 0; s < labels.probs.size(); ++s) {
    out << fmt::format("{:.3f},{}\n", labels.t0 + static_cast<double>(s), labels.probs[s]);
  }
}

void write_label_csv(const std::string& path, const ContextLabelStream& labels) {
  auto out = csv::open_output(path);
  write_label_csv(out, labels);
}

ContextLabelStream read_label_csv(std::istream& in, std::string subject_id) {
  csv::Reader reader(in);
  reader.expect_header({"t", "p_indoor"});
  ContextLabelStream labels{std::move(subject_id), 0.0, {}};
  std::vector<std::string> f;
  while (reader.next(f)) {
    const double t = reader.number(f, 0);
    const double p = reader.number(f, 1);
    if (labels.probs.empty()) {
      labels.t0 = t;
    } else if (std::abs(t - (labels.t0 + static_cast<double>(labels.probs.size()))) > 1e-3) {
      throw InvalidInput(fmt::format("label csv: row {} breaks the 1 Hz sequence", reader.row()));
    }
    if (p < 0.0 || p > 1.0) throw InvalidInput(fmt::format("label csv: row {} probability outside [0,1]", reader.row()));
    labels.probs.push_back(p);
  }
  return labels;
}

ContextLabelStream read_label_csv(const std::string& path, std::string subject_id) {
  auto in = csv::open_input(path);
  return read_label_csv(in, std::move(subject_id));
}

}  // namespace ioctx
