#pragma once

#include "ioctx/minirocket.hpp"
#include "ioctx/rocket.hpp"
#include "ioctx/series_dataset.hpp"
#include "ioctx/tabular.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ioctx {

// Raw-signal classifier: fit on a training split, predict a test split.
class SeriesClassifier {
 public:
  virtual ~SeriesClassifier() = default;
  virtual std::string_view name() const = 0;
  virtual bool requires_fixed_length() const = 0;
  virtual void fit(const SeriesDataset& train) = 0;
  virtual std::vector<Context> predict(const SeriesDataset& test) const = 0;
  virtual nlohmann::json summary() const = 0;
};

// ROCKET features followed by the LOO-tuned ridge classifier.
class RocketClassifier final : public SeriesClassifier {
 public:
  RocketClassifier(std::size_t num_kernels, std::uint64_t seed, std::vector<double> alphas, int jobs = 1);

  std::string_view name() const override { return "rocket"; }
  bool requires_fixed_length() const override { return true; }
  void fit(const SeriesDataset& train) override;
  std::vector<Context> predict(const SeriesDataset& test) const override;
  nlohmann::json summary() const override;

  const RocketKernelBank& bank() const { return bank_; }

 private:
  std::size_t num_kernels_;
  std::uint64_t seed_;
  std::vector<double> alphas_;
  int jobs_;
  RocketKernelBank bank_;
  std::optional<RidgeModel> ridge_;
};

class MiniRocketClassifier final : public SeriesClassifier {
 public:
  MiniRocketClassifier(MiniRocketConfig cfg, std::vector<double> alphas, int jobs = 1);

  std::string_view name() const override { return "minirocket"; }
  bool requires_fixed_length() const override { return true; }
  void fit(const SeriesDataset& train) override;
  std::vector<Context> predict(const SeriesDataset& test) const override;
  nlohmann::json summary() const override;

 private:
  MiniRocketConfig cfg_;
  std::vector<double> alphas_;
  int jobs_;
  MiniRocketParams params_;
  std::optional<RidgeModel> ridge_;
};

class Dtw1nnClassifier final : public SeriesClassifier {
 public:
  explicit Dtw1nnClassifier(int jobs = 1) : jobs_(jobs) {}

  std::string_view name() const override { return "dtw"; }
  bool requires_fixed_length() const override { return false; }
  void fit(const SeriesDataset& train) override;
  std::vector<Context> predict(const SeriesDataset& test) const override;
  nlohmann::json summary() const override;

 private:
  int jobs_;
  std::optional<SeriesDataset> train_;
};

}  // namespace ioctx
