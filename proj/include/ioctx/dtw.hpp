#pragma once

#include "ioctx/series_dataset.hpp"

#include <span>
#include <vector>

namespace ioctx {

// Unconstrained DTW with squared point cost and both ends aligned; returns the
// accumulated cost of the cheapest warping path.
double dtw_distance(std::span<const double> a, std::span<const double> b);

// Label of the nearest training series under DTW; distance ties go to the
// lower training index. Series may have any lengths.
std::vector<Context> knn1_dtw_predict(const SeriesDataset& train, const SeriesDataset& test, int jobs = 1);

}  // namespace ioctx
