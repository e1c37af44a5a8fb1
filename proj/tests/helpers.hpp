#pragma once

#include "ioctx/series_dataset.hpp"
#include "ioctx/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testing {

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline ioctx::SeriesDataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                                         ioctx::LengthMode mode = ioctx::LengthMode::fixed) {
  ioctx::SeriesDataset d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.series.emplace_back(rows[i]);
    d.y.push_back(ioctx::context_from_index(labels[i]));
    d.subjects.push_back("S" + std::to_string(i % 3));
  }
  d.length_mode = mode;
  return d;
}

}  // namespace testing
