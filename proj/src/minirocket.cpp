#include "ioctx/minirocket.hpp"

#include "ioctx/error.hpp"
#include "ioctx/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace ioctx {

const std::array<std::array<int, 3>, kMiniRocketNumKernels>& minirocket_kernel_indices() {
  static const auto table = [] {
    std::array<std::array<int, 3>, kMiniRocketNumKernels> t{};
    std::size_t k = 0;
    for (int a = 0; a < 9; ++a)
      for (int b = a + 1; b < 9; ++b)
        for (int c = b + 1; c < 9; ++c) t[k++] = {a, b, c};
    return t;
  }();
  return table;
}

std::pair<std::vector<int>, std::vector<int>> minirocket_dilations(std::size_t input_length,
                                                                   std::size_t num_features,
                                                                   int max_dilations_per_kernel) {
  if (input_length < kMiniRocketKernelLength) {
    throw InvalidInput(fmt::format("minirocket: series length {} is shorter than the kernel", input_length));
  }
  const std::size_t per_kernel = num_features / kMiniRocketNumKernels;
  if (per_kernel == 0) throw InvalidInput("minirocket: feature budget below 84");
  const auto true_max = static_cast<int>(std::min<std::size_t>(per_kernel, static_cast<std::size_t>(max_dilations_per_kernel)));
  const double multiplier = static_cast<double>(per_kernel) / true_max;
  const double max_exponent = std::log2(static_cast<double>(input_length - 1) / (kMiniRocketKernelLength - 1));

  std::vector<int> dilations;
  std::vector<int> counts;
  for (int i = 0; i < true_max; ++i) {
    const double e = true_max == 1 ? 0.0 : max_exponent * i / (true_max - 1);
    const int d = static_cast<int>(std::floor(std::pow(2.0, e)));
    if (!dilations.empty() && dilations.back() == d) {
      ++counts.back();
    } else {
      dilations.push_back(d);
      counts.push_back(1);
    }
  }
  std::vector<int> features(counts.size());
  int assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    features[i] = static_cast<int>(counts[i] * multiplier);
    assigned += features[i];
  }
  int remainder = static_cast<int>(per_kernel) - assigned;
  for (std::size_t i = 0; remainder > 0; i = (i + 1) % features.size(), --remainder) ++features[i];
  return {dilations, features};
}

std::vector<double> minirocket_quantiles(std::size_t n) {
  const double phi = (std::sqrt(5.0) + 1.0) / 2.0;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = std::fmod(static_cast<double>(i + 1) * phi, 1.0);
  return q;
}

namespace {

// Per-dilation precomputation: the convolution of every kernel is
// -sum(all taps) + 3 * (three selected taps).
struct DilatedTaps {
  std::vector<double> alpha;                   // -sum of the nine shifted copies
  std::array<std::vector<double>, 9> gamma;    // 3 * shifted copy per tap

  DilatedTaps(std::span<const double> x, int dilation) : alpha(x.size(), 0.0) {
    const auto n = static_cast<long>(x.size());
    for (long j = 0; j < 9; ++j) {
      auto& g = gamma[static_cast<std::size_t>(j)];
      g.assign(x.size(), 0.0);
      const long shift = (j - 4) * dilation;
      const long lo = std::max(0L, -shift);
      const long hi = std::min(n, n - shift);
      for (long t = lo; t < hi; ++t) {
        const double v = x[static_cast<std::size_t>(t + shift)];
        alpha[static_cast<std::size_t>(t)] -= v;
        g[static_cast<std::size_t>(t)] = 3.0 * v;
      }
    }
  }

  void kernel(std::size_t k, std::vector<double>& out) const {
    const auto& idx = minirocket_kernel_indices()[k];
    const auto& a = gamma[static_cast<std::size_t>(idx[0])];
    const auto& b = gamma[static_cast<std::size_t>(idx[1])];
    const auto& c = gamma[static_cast<std::size_t>(idx[2])];
    out.resize(alpha.size());
    for (std::size_t t = 0; t < alpha.size(); ++t) out[t] = alpha[t] + a[t] + b[t] + c[t];
  }
};

// Linear-interpolation quantile of ascending values.
double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<double> minirocket_convolution(std::span<const double> x, std::size_t kernel_index, int dilation) {
  DilatedTaps taps(x, dilation);
  std::vector<double> out;
  taps.kernel(kernel_index, out);
  return out;
}

MiniRocketParams fit_minirocket(const SeriesDataset& train, const MiniRocketConfig& cfg) {
  train.validate();
  if (train.series.empty()) throw InvalidInput("minirocket: empty training set");
  MiniRocketParams params;
  params.input_length = train.fixed_length();
  params.seed = cfg.seed;
  std::tie(params.dilations, params.features_per_dilation) =
      minirocket_dilations(params.input_length, cfg.num_features, cfg.max_dilations_per_kernel);

  std::size_t total = 0;
  for (int f : params.features_per_dilation) total += static_cast<std::size_t>(f) * kMiniRocketNumKernels;
  const auto quantiles = minirocket_quantiles(total);
  params.biases.resize(total);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
  std::size_t feature = 0;
  std::vector<double> conv;
  for (std::size_t di = 0; di < params.dilations.size(); ++di) {
    const auto nf = static_cast<std::size_t>(params.features_per_dilation[di]);
    for (std::size_t k = 0; k < kMiniRocketNumKernels; ++k) {
      const auto& example = train.series[pick(rng)];
      conv = minirocket_convolution(example.values(), k, params.dilations[di]);
      std::sort(conv.begin(), conv.end());
      for (std::size_t f = 0; f < nf; ++f, ++feature) params.biases[feature] = quantile_sorted(conv, quantiles[feature]);
    }
  }
  params.fitted = true;
  return params;
}

TabularDataset minirocket_transform(const SeriesDataset& data, const MiniRocketParams& params, int jobs) {
  if (!params.fitted) throw NotFitted("minirocket: transform called before fitting biases");
  data.validate();
  if (!data.series.empty() && data.fixed_length() != params.input_length) {
    throw InvalidInput(fmt::format("minirocket: fitted for length {}, got {}", params.input_length, data.fixed_length()));
  }
  const auto n = data.size();
  const auto nf_total = params.num_features();
  TabularDataset out;
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nf_total));
  std::vector<double> buffer(n * nf_total);

  parallel_for(n, jobs, [&](std::size_t i) {
    const auto x = data.series[i].values();
    const auto len = static_cast<long>(x.size());
    double* row = buffer.data() + i * nf_total;
    std::size_t feature = 0;
    std::vector<double> conv;
    for (std::size_t di = 0; di < params.dilations.size(); ++di) {
      const int dilation = params.dilations[di];
      const long padding = ((kMiniRocketKernelLength - 1) * static_cast<long>(dilation)) / 2;
      const auto nf = static_cast<std::size_t>(params.features_per_dilation[di]);
      const DilatedTaps taps(x, dilation);
      for (std::size_t k = 0; k < kMiniRocketNumKernels; ++k) {
        taps.kernel(k, conv);
        // Alternate between the full output and its unpadded interior.
        const bool full = (di % 2 + k) % 2 == 0;
        const long lo = full ? 0 : padding;
        const long hi = full ? len : len - padding;
        const double count = static_cast<double>(hi - lo);
        for (std::size_t f = 0; f < nf; ++f, ++feature) {
          const double bias = params.biases[feature];
          long positive = 0;
          for (long t = lo; t < hi; ++t) positive += conv[static_cast<std::size_t>(t)] > bias;
          row[feature] = count > 0 ? static_cast<double>(positive) / count : 0.0;
        }
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nf_total; ++j) {
      out.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = buffer[i * nf_total + j];
    }
  }
  out.y = data.y;
  out.subjects = data.subjects;
  out.feature_names.reserve(nf_total);
  for (std::size_t j = 0; j < nf_total; ++j) out.feature_names.push_back(fmt::format("mr{}", j));
  return out;
}

nlohmann::json to_json(const MiniRocketParams& params) {
  return {{"kind", "minirocket_params"},
          {"input_length", params.input_length},
          {"seed", params.seed},
          {"dilations", params.dilations},
          {"features_per_dilation", params.features_per_dilation},
          {"num_features", params.num_features()},
          {"fitted", params.fitted}};
}

}  // namespace ioctx
