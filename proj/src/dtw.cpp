#include "ioctx/dtw.hpp"

#include "ioctx/error.hpp"
#include "ioctx/parallel.hpp"

#include <algorithm>
#include <limits>

namespace ioctx {

double dtw_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("dtw: series must be non-empty");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t m = b.size();
  std::vector<double> prev(m + 1, inf);
  std::vector<double> curr(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = inf;
    const double ai = a[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      const double diff = ai - b[j - 1];
      curr[j] = diff * diff + std::min({prev[j - 1], prev[j], curr[j - 1]});
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

std::vector<Context> knn1_dtw_predict(const SeriesDataset& train, const SeriesDataset& test, int jobs) {
  train.validate();
  test.validate();
  if (train.series.empty()) throw InvalidInput("1nn-dtw: training set is empty");
  std::vector<Context> out(test.size());
  parallel_for(test.size(), jobs, [&](std::size_t q) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const double d = dtw_distance(test.series[q].values(), train.series[i].values());
      if (d < best) {
        best = d;
        best_index = i;
      }
    }
    out[q] = train.y[best_index];
  });
  return out;
}

}  // namespace ioctx
