#include "doctest.h"
#include "helpers.hpp"

#include "ioctx/error.hpp"
#include "ioctx/signal.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace ioctx;

TEST_CASE("UnivariateSeries rejects empty and non-finite input") {
  CHECK_THROWS_AS(UnivariateSeries(std::vector<double>{}), InvalidInput);
  CHECK_THROWS_AS(UnivariateSeries({1.0, NAN}), InvalidInput);
  CHECK_THROWS_AS(UnivariateSeries({1.0, INFINITY}), InvalidInput);
  CHECK(UnivariateSeries({1.0}).size() == 1);
}

TEST_CASE("zscore moments on random series") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto n = 2 + rng() % 500;
    auto v = testing::random_values(rng, n, -50.0, 80.0);
    const auto z = zscore(UnivariateSeries(v));
    long double mean = 0, var = 0;
    for (double x : z.values()) mean += x;
    mean /= n;
    for (double x : z.values()) var += (x - mean) * (x - mean);
    var /= n;
    CHECK(std::abs(static_cast<double>(mean)) < 1e-12);
    CHECK(std::abs(static_cast<double>(var) - 1.0) < 1e-9);
  }
}

TEST_CASE("zscore of a constant series is all zeros") {
  const auto z = zscore(UnivariateSeries(std::vector<double>(17, 3.25)));
  for (double x : z.values()) CHECK(x == 0.0);
}

TEST_CASE("pad_to_length centers and preserves the sum") {
  const auto p = pad_to_length(UnivariateSeries({1.0, 2.0, 3.0}), 6);
  REQUIRE(p.size() == 6);
  CHECK(p.vector() == std::vector<double>{0.0, 1.0, 2.0, 3.0, 0.0, 0.0});

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto n = 1 + rng() % 100;
    auto v = testing::random_values(rng, n);
    const auto target = n + rng() % 50;
    const auto padded = pad_to_length(UnivariateSeries(v), target);
    CHECK(padded.size() == target);
    const double a = std::accumulate(v.begin(), v.end(), 0.0);
    const double b = std::accumulate(padded.vector().begin(), padded.vector().end(), 0.0);
    CHECK(std::abs(a - b) < 1e-12);
  }
  CHECK_THROWS_AS(pad_to_length(UnivariateSeries({1.0, 2.0}), 1), InvalidInput);
}

TEST_CASE("resample identity and endpoints") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const auto n = 2 + rng() % 200;
    auto v = testing::random_values(rng, n);
    const UnivariateSeries s(v);
    CHECK(resample_to_length(s, n).vector() == v);
    const auto target = 2 + rng() % 400;
    const auto r = resample_to_length(s, target);
    REQUIRE(r.size() == target);
    CHECK(r[0] == v.front());
    CHECK(r[target - 1] == v.back());
  }
  // A linear ramp stays linear.
  const auto r = resample_to_length(UnivariateSeries({0.0, 1.0, 2.0}), 5);
  CHECK(r.vector() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("channels") {
  InertialStream s;
  s.samples = {{3.0, 4.0, 0.0}, {1.0, 2.0, 2.0}, {1e-3, 2e-3, 2e-3}};
  const auto m = magnitude_channel(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const long double x = s.samples[i].x, y = s.samples[i].y, z = s.samples[i].z;
    CHECK(m[i] == doctest::Approx(static_cast<double>(std::sqrt(x * x + y * y + z * z))).epsilon(1e-15));
  }
  CHECK(vertical_channel(s, "x")[0] == 3.0);
  CHECK(vertical_channel(s, Axis::z)[1] == 2.0);
  CHECK_THROWS_AS(parse_axis("w"), InvalidInput);
}

TEST_CASE("IMU CSV round trip and sampling checks") {
  InertialStream s;
  s.subject_id = "S01";
  s.sample_rate_hz = 100.0;
  s.start_time = 1700000000.0;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 250; ++i) {
    auto v = testing::random_values(rng, 3);
    s.samples.push_back({v[0], v[1], v[2]});
  }
  std::stringstream buf;
  write_imu_csv(buf, s);
  const auto back = read_imu_csv(buf, "S01");
  CHECK(back.size() == s.size());
  CHECK(back.sample_rate_hz == doctest::Approx(100.0));
  CHECK(back.start_time == s.start_time);
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Accelerations are written with six significant digits.
    CHECK(back.samples[i].x == doctest::Approx(s.samples[i].x).epsilon(1e-5));
    CHECK(back.samples[i].z == doctest::Approx(s.samples[i].z).epsilon(1e-5));
  }

  std::stringstream gap("t,acc_x,acc_y,acc_z\n0,0,0,1\n0.01,0,0,1\n0.03,0,0,1\n");
  CHECK_THROWS_AS(read_imu_csv(gap, "S"), InvalidInput);
  std::stringstream header("time,x,y,z\n0,0,0,1\n");
  CHECK_THROWS_AS(read_imu_csv(header, "S"), InvalidInput);
  std::stringstream empty("t,acc_x,acc_y,acc_z\n");
  CHECK_THROWS_AS(read_imu_csv(empty, "S"), InvalidInput);
}
