#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ioctx {

struct Acceleration {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Uniformly sampled tri-axial acceleration for one subject.
struct InertialStream {
  std::string subject_id;
  double sample_rate_hz = 100.0;
  double start_time = 0.0;  // epoch seconds of samples[0]
  std::vector<Acceleration> samples;

  std::size_t size() const { return samples.size(); }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

struct SeriesMeta {
  std::string subject_id;
  int window_index = -1;
  int bout_index = -1;
};

// Non-empty sequence of finite values. The constructor enforces both.
class UnivariateSeries {
 public:
  explicit UnivariateSeries(std::vector<double> values, SeriesMeta meta = {});

  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }
  const SeriesMeta& meta() const { return meta_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
  SeriesMeta meta_;
};

enum class Axis { x, y, z };

// "x", "y" or "z"; anything else throws InvalidInput.
Axis parse_axis(std::string_view name);

UnivariateSeries vertical_channel(const InertialStream& stream, Axis axis);
UnivariateSeries vertical_channel(const InertialStream& stream, std::string_view axis_name);

// Element-wise Euclidean norm of the three axes.
UnivariateSeries magnitude_channel(const InertialStream& stream);

// Population z-score. A constant series maps to all zeros.
UnivariateSeries zscore(const UnivariateSeries& series);
std::vector<double> zscore_values(std::span<const double> values);

// Centers the series inside target_len zeros; odd slack puts the extra zero at the end.
UnivariateSeries pad_to_length(const UnivariateSeries& series, std::size_t target_len);

// Linear interpolation over a uniform [0, 1] parameterization. Endpoints are exact.
UnivariateSeries resample_to_length(const UnivariateSeries& series, std::size_t target_len);

// IMU CSV with header `t,acc_x,acc_y,acc_z`. Sampling must be uniform within 1e-6 s.
InertialStream read_imu_csv(std::istream& in, std::string subject_id);
InertialStream read_imu_csv(const std::string& path, std::string subject_id);
void write_imu_csv(std::ostream& out, const InertialStream& stream);
void write_imu_csv(const std::string& path, const InertialStream& stream);

inline constexpr double kSamplingTolerance_s = 1e-6;

}  // namespace ioctx
