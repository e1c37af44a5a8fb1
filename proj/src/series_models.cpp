#include "ioctx/series_models.hpp"

#include "ioctx/dtw.hpp"
#include "ioctx/error.hpp"

#include <fmt/format.h>

namespace ioctx {

RocketClassifier::RocketClassifier(std::size_t num_kernels, std::uint64_t seed, std::vector<double> alphas, int jobs)
    : num_kernels_(num_kernels), seed_(seed), alphas_(std::move(alphas)), jobs_(jobs) {
  if (num_kernels_ == 0) throw InvalidInput("rocket: num_kernels must be positive");
}

void RocketClassifier::fit(const SeriesDataset& train) {
  train.validate();
  if (train.size() == 0) throw InvalidInput("rocket: empty training set");
  require_both_classes(train.y, "rocket");
  bank_ = generate_rocket_kernels(train.fixed_length(), num_kernels_, seed_);
  const auto features = rocket_transform(train, bank_, jobs_);
  ridge_ = fit_ridge_classifier(features.features.X, train.y, alphas_);
}

std::vector<Context> RocketClassifier::predict(const SeriesDataset& test) const {
  if (!ridge_) throw NotFitted("rocket: predict called before fit");
  return ridge_->predict(rocket_transform(test, bank_, jobs_).features.X);
}

nlohmann::json RocketClassifier::summary() const {
  nlohmann::json j = {{"kind", "rocket"}, {"num_kernels", num_kernels_}, {"seed", seed_}};
  if (ridge_) j["ridge"] = ridge_->summary();
  return j;
}

MiniRocketClassifier::MiniRocketClassifier(MiniRocketConfig cfg, std::vector<double> alphas, int jobs)
    : cfg_(cfg), alphas_(std::move(alphas)), jobs_(jobs) {}

void MiniRocketClassifier::fit(const SeriesDataset& train) {
  train.validate();
  if (train.size() == 0) throw InvalidInput("minirocket: empty training set");
  require_both_classes(train.y, "minirocket");
  params_ = fit_minirocket(train, cfg_);
  ridge_ = fit_ridge_classifier(minirocket_transform(train, params_, jobs_).X, train.y, alphas_);
}

std::vector<Context> MiniRocketClassifier::predict(const SeriesDataset& test) const {
  if (!ridge_) throw NotFitted("minirocket: predict called before fit");
  return ridge_->predict(minirocket_transform(test, params_, jobs_).X);
}

nlohmann::json MiniRocketClassifier::summary() const {
  nlohmann::json j = {{"kind", "minirocket"},
                      {"num_features", params_.num_features()},
                      {"dilations", params_.dilations},
                      {"seed", cfg_.seed}};
  if (ridge_) j["ridge"] = ridge_->summary();
  return j;
}

void Dtw1nnClassifier::fit(const SeriesDataset& train) {
  train.validate();
  if (train.size() == 0) throw InvalidInput("dtw: empty training set");
  train_ = train;
}

std::vector<Context> Dtw1nnClassifier::predict(const SeriesDataset& test) const {
  if (!train_) throw NotFitted("dtw: predict called before fit");
  return knn1_dtw_predict(*train_, test, jobs_);
}

nlohmann::json Dtw1nnClassifier::summary() const {
  return {{"kind", "dtw"}, {"train_size", train_ ? train_->size() : 0}};
}

}  // namespace ioctx
