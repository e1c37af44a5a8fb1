#include "ioctx/rocket.hpp"

#include "ioctx/error.hpp"
#include "ioctx/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace ioctx {

RocketKernelBank generate_rocket_kernels(std::size_t input_length, std::size_t num_kernels, std::uint64_t seed) {
  if (input_length < 1) throw InvalidInput("rocket: input length must be positive");
  RocketKernelBank bank;
  bank.seed = seed;
  bank.input_length = input_length;
  bank.kernels.reserve(num_kernels);

  std::mt19937_64 rng(seed);
  constexpr int kLengths[] = {7, 9, 11};
  std::uniform_int_distribution<int> pick_length(0, 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);

  for (std::size_t k = 0; k < num_kernels; ++k) {
    RocketKernel kernel;
    kernel.length = kLengths[pick_length(rng)];
    kernel.weights.resize(static_cast<std::size_t>(kernel.length));
    for (auto& w : kernel.weights) w = normal(rng);
    const double mean = std::accumulate(kernel.weights.begin(), kernel.weights.end(), 0.0) / kernel.length;
    for (auto& w : kernel.weights) w -= mean;
    kernel.bias = -1.0 + 2.0 * unit(rng);
    const double ratio = static_cast<double>(input_length - 1) / static_cast<double>(kernel.length - 1);
    const double max_exponent = ratio > 1.0 ? std::log2(ratio) : 0.0;
    kernel.dilation = static_cast<int>(std::floor(std::pow(2.0, unit(rng) * max_exponent)));
    kernel.dilation = std::max(kernel.dilation, 1);
    kernel.padding = coin(rng) == 1 ? ((kernel.length - 1) * kernel.dilation) / 2 : 0;
    bank.kernels.push_back(std::move(kernel));
  }
  return bank;
}

nlohmann::json to_json(const RocketKernelBank& bank) {
  nlohmann::json kernels = nlohmann::json::array();
  for (const auto& k : bank.kernels) {
    kernels.push_back({{"length", k.length},
                       {"weights", k.weights},
                       {"bias", k.bias},
                       {"dilation", k.dilation},
                       {"padding", k.padding}});
  }
  return {{"kind", "rocket_kernel_bank"},
          {"seed", bank.seed},
          {"input_length", bank.input_length},
          {"num_kernels", bank.kernels.size()},
          {"kernels", kernels}};
}

RocketKernelBank rocket_bank_from_json(const nlohmann::json& j) {
  RocketKernelBank bank;
  try {
    bank.seed = j.at("seed").get<std::uint64_t>();
    bank.input_length = j.at("input_length").get<std::size_t>();
    for (const auto& k : j.at("kernels")) {
      RocketKernel kernel;
      kernel.length = k.at("length").get<int>();
      kernel.weights = k.at("weights").get<std::vector<double>>();
      kernel.bias = k.at("bias").get<double>();
      kernel.dilation = k.at("dilation").get<int>();
      kernel.padding = k.at("padding").get<int>();
      if (static_cast<int>(kernel.weights.size()) != kernel.length || kernel.dilation < 1 || kernel.padding < 0) {
        throw InvalidInput("rocket bank json: inconsistent kernel");
      }
      bank.kernels.push_back(std::move(kernel));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(fmt::format("rocket bank json: {}", e.what()));
  }
  if (j.contains("num_kernels") && j.at("num_kernels").get<std::size_t>() != bank.kernels.size()) {
    throw InvalidInput("rocket bank json: kernel count mismatch");
  }
  return bank;
}

std::size_t rocket_features(std::span<const double> x, const RocketKernelBank& bank, std::span<double> out) {
  if (out.size() != bank.num_features()) throw InvalidInput("rocket: output buffer has the wrong size");
  const auto len_in = static_cast<long>(x.size());
  std::vector<double> conv;
  std::size_t short_count = 0;
  for (std::size_t k = 0; k < bank.kernels.size(); ++k) {
    const auto& kernel = bank.kernels[k];
    const long d = kernel.dilation;
    const long p = kernel.padding;
    const long out_len = len_in + 2 * p - (kernel.length - 1) * d;
    if (out_len <= 0) {
      out[2 * k] = 0.0;
      out[2 * k + 1] = 0.0;
      ++short_count;
      continue;
    }
    conv.assign(static_cast<std::size_t>(out_len), kernel.bias);
    double* c = conv.data();
    for (long j = 0; j < kernel.length; ++j) {
      const double w = kernel.weights[static_cast<std::size_t>(j)];
      const long offset = j * d - p;  // input index = i + offset
      const long lo = std::max(0L, -offset);
      const long hi = std::min(out_len, len_in - offset);
      if (hi <= lo) continue;
      const double* src = x.data() + (lo + offset);
      double* dst = c + lo;
      for (long i = 0; i < hi - lo; ++i) dst[i] += w * src[i];
    }
    long positive = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < out_len; ++i) {
      positive += c[i] > 0.0;
      best = std::max(best, c[i]);
    }
    out[2 * k] = static_cast<double>(positive) / static_cast<double>(out_len);
    out[2 * k + 1] = best;
  }
  return short_count;
}

RocketTransformResult rocket_transform(const SeriesDataset& data, const RocketKernelBank& bank, int jobs) {
  data.validate();
  if (!data.series.empty()) data.fixed_length();
  RocketTransformResult result;
  auto& out = result.features;
  const auto n = data.size();
  const auto f = bank.num_features();
  // Row-major scratch so each series writes a contiguous block.
  std::vector<double> buffer(n * f);
  std::atomic<std::size_t> short_total{0};
  parallel_for(n, jobs, [&](std::size_t i) {
    short_total += rocket_features(data.series[i].values(), bank, std::span<double>(buffer.data() + i * f, f));
  });
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) out.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = buffer[i * f + j];
  }
  out.y = data.y;
  out.subjects = data.subjects;
  out.feature_names.reserve(f);
  for (std::size_t k = 0; k < bank.kernels.size(); ++k) {
    out.feature_names.push_back(fmt::format("k{}_ppv", k));
    out.feature_names.push_back(fmt::format("k{}_max", k));
  }
  result.short_series_warnings = short_total.load();
  return result;
}

}  // namespace ioctx
