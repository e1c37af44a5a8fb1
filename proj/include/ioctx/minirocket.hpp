#pragma once

#include "ioctx/series_dataset.hpp"
#include "ioctx/tabular_dataset.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace ioctx {

inline constexpr std::size_t kMiniRocketKernelLength = 9;
inline constexpr std::size_t kMiniRocketNumKernels = 84;  // C(9, 3)

// Positions of the three weight-2 taps for each kernel (all other taps are -1),
// in lexicographic order.
const std::array<std::array<int, 3>, kMiniRocketNumKernels>& minirocket_kernel_indices();

struct MiniRocketParams {
  std::size_t input_length = 0;
  std::vector<int> dilations;               // ascending, unique
  std::vector<int> features_per_dilation;   // per dilation, for every kernel
  std::vector<double> biases;               // one per feature
  std::uint64_t seed = 0;
  bool fitted = false;

  std::size_t num_features() const { return biases.size(); }
};

struct MiniRocketConfig {
  std::size_t num_features = 10000;
  int max_dilations_per_kernel = 32;
  std::uint64_t seed = 0;
};

// Dilation grid for a series length: returns (dilations, features per dilation).
std::pair<std::vector<int>, std::vector<int>> minirocket_dilations(std::size_t input_length,
                                                                   std::size_t num_features,
                                                                   int max_dilations_per_kernel);

// Low-discrepancy quantile levels, ((i + 1) * golden ratio) mod 1.
std::vector<double> minirocket_quantiles(std::size_t n);

// Full ("same", zero-padded) convolution of x with kernel `kernel_index` at `dilation`.
std::vector<double> minirocket_convolution(std::span<const double> x, std::size_t kernel_index, int dilation);

// Biases are quantiles of convolutions of randomly chosen training series.
MiniRocketParams fit_minirocket(const SeriesDataset& train, const MiniRocketConfig& cfg = {});

// PPV features over the fitted kernel/dilation/bias grid. Throws NotFitted
// when params were not fitted.
TabularDataset minirocket_transform(const SeriesDataset& data, const MiniRocketParams& params, int jobs = 1);

nlohmann::json to_json(const MiniRocketParams& params);

}  // namespace ioctx
