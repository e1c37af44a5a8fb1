#pragma once

#include "ioctx/series_dataset.hpp"
#include "ioctx/tabular_dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace ioctx {

struct RocketKernel {
  int length = 9;               // 7, 9 or 11
  std::vector<double> weights;  // mean-centered standard normal draws
  double bias = 0.0;            // U(-1, 1)
  int dilation = 1;             // floor(2^a), a ~ U(0, log2((L - 1) / (length - 1)))
  int padding = 0;              // ((length - 1) * dilation) / 2 or 0
};

struct RocketKernelBank {
  std::uint64_t seed = 0;
  std::size_t input_length = 0;
  std::vector<RocketKernel> kernels;

  std::size_t num_features() const { return 2 * kernels.size(); }
};

inline constexpr std::size_t kRocketDefaultKernels = 10000;

RocketKernelBank generate_rocket_kernels(std::size_t input_length, std::size_t num_kernels, std::uint64_t seed);

nlohmann::json to_json(const RocketKernelBank& bank);
RocketKernelBank rocket_bank_from_json(const nlohmann::json& j);

// Writes [ppv, max] per kernel into `out` (size 2 * kernels). Returns the
// number of kernels whose dilated extent exceeds the series without padding;
// those emit (0, 0).
std::size_t rocket_features(std::span<const double> x, const RocketKernelBank& bank, std::span<double> out);

struct RocketTransformResult {
  TabularDataset features;
  std::size_t short_series_warnings = 0;
};

// Fixed-length datasets only.
RocketTransformResult rocket_transform(const SeriesDataset& data, const RocketKernelBank& bank, int jobs = 1);

}  // namespace ioctx
