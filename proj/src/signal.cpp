#include "ioctx/signal.hpp"

#include "ioctx/csv.hpp"
#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace ioctx {

UnivariateSeries::UnivariateSeries(std::vector<double> values, SeriesMeta meta)
    : values_(std::move(values)), meta_(std::move(meta)) {
  if (values_.empty()) throw InvalidInput("series must contain at least one value");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("series contains a non-finite value");
  }
}

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw InvalidInput(fmt::format("axis must be one of x, y, z (got `{}`)", name));
}

namespace {

void require_samples(const InertialStream& stream) {
  if (stream.samples.empty()) throw InvalidInput("inertial stream is empty");
}

SeriesMeta stream_meta(const InertialStream& stream) { return SeriesMeta{stream.subject_id, -1, -1}; }

}  // namespace

UnivariateSeries vertical_channel(const InertialStream& stream, Axis axis) {
  require_samples(stream);
  std::vector<double> out;
  out.reserve(stream.size());
  for (const auto& s : stream.samples) {
    switch (axis) {
      case Axis::x: out.push_back(s.x); break;
      case Axis::y: out.push_back(s.y); break;
      case Axis::z: out.push_back(s.z); break;
    }
  }
  return UnivariateSeries(std::move(out), stream_meta(stream));
}

UnivariateSeries vertical_channel(const InertialStream& stream, std::string_view axis_name) {
  return vertical_channel(stream, parse_axis(axis_name));
}

UnivariateSeries magnitude_channel(const InertialStream& stream) {
  require_samples(stream);
  std::vector<double> out;
  out.reserve(stream.size());
  for (const auto& s : stream.samples) out.push_back(std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z));
  return UnivariateSeries(std::move(out), stream_meta(stream));
}

std::vector<double> zscore_values(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return out;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

UnivariateSeries zscore(const UnivariateSeries& series) {
  return UnivariateSeries(zscore_values(series.values()), series.meta());
}

UnivariateSeries pad_to_length(const UnivariateSeries& series, std::size_t target_len) {
  if (target_len == 0) throw InvalidInput("pad target length must be positive");
  if (series.size() > target_len) {
    throw InvalidInput(fmt::format("cannot pad a series of length {} to {}", series.size(), target_len));
  }
  const std::size_t leading = (target_len - series.size()) / 2;
  std::vector<double> out(target_len, 0.0);
  std::copy(series.values().begin(), series.values().end(), out.begin() + static_cast<std::ptrdiff_t>(leading));
  return UnivariateSeries(std::move(out), series.meta());
}

UnivariateSeries resample_to_length(const UnivariateSeries& series, std::size_t target_len) {
  if (series.size() < 2) throw InvalidInput("resampling needs at least two samples");
  if (target_len < 2) throw InvalidInput("resampling target length must be at least 2");
  const std::size_t n = series.size();
  if (n == target_len) return series;
  const auto src = series.values();
  std::vector<double> out(target_len);
  const double scale = static_cast<double>(n - 1) / static_cast<double>(target_len - 1);
  for (std::size_t i = 0; i < target_len; ++i) {
    const double pos = static_cast<double>(i) * scale;
    const auto k = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(k);
    out[i] = src[k] + frac * (src[k + 1] - src[k]);
  }
  out.front() = src.front();
  out.back() = src.back();
  return UnivariateSeries(std::move(out), series.meta());
}

InertialStream read_imu_csv(std::istream& in, std::string subject_id) {
  csv::Reader reader(in);
  reader.expect_header({"t", "acc_x", "acc_y", "acc_z"});
  InertialStream stream;
  stream.subject_id = std::move(subject_id);
  std::vector<double> times;
  std::vector<std::string> f;
  while (reader.next(f)) {
    times.push_back(reader.number(f, 0));
    stream.samples.push_back({reader.number(f, 1), reader.number(f, 2), reader.number(f, 3)});
  }
  if (times.size() < 2) throw InvalidInput("imu csv: need at least two samples to infer the sampling rate");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw InvalidInput("imu csv: timestamps must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > kSamplingTolerance_s) {
      throw InvalidInput(fmt::format("imu csv: non-uniform sampling at row {} (dt {} vs {})", i + 1,
                                     times[i] - times[i - 1], dt));
    }
  }
  stream.start_time = times.front();
  // Round away representation noise, e.g. 99.99999999 Hz from 0.01 s steps.
  stream.sample_rate_hz = std::round(1e6 / dt) / 1e6;
  return stream;
}

InertialStream read_imu_csv(const std::string& path, std::string subject_id) {
  auto in = csv::open_input(path);
  return read_imu_csv(in, std::move(subject_id));
}

void write_imu_csv(std::ostream& out, const InertialStream& stream) {
  out << "t,acc_x,acc_y,acc_z\n";
  for (std::size_t i = 0; i < stream.samples.size(); ++i) {
    const auto& s = stream.samples[i];
    const double t = stream.start_time + static_cast<double>(i) / stream.sample_rate_hz;
    out << fmt::format("{:.6f},{:.6g},{:.6g},{:.6g}\n", t, s.x, s.y, s.z);
  }
}

void write_imu_csv(const std::string& path, const InertialStream& stream) {
  auto out = csv::open_output(path);
  write_imu_csv(out, stream);
}

}  // namespace ioctx
