#include "ioctx/standardize.hpp"

#include "ioctx/error.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ioctx {

void TabularDataset::validate(bool require_finite) const {
  if (X.cols() < 1) throw InvalidInput("tabular dataset needs at least one feature");
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw InvalidInput("feature rows and labels differ in count");
  if (!subjects.empty() && subjects.size() != y.size()) throw InvalidInput("subject ids and labels differ in count");
  if (!feature_names.empty() && feature_names.size() != cols()) {
    throw InvalidInput("feature names and columns differ in count");
  }
  if (require_finite && !X.allFinite()) throw InvalidInput("tabular dataset contains non-finite values");
}

TabularDataset TabularDataset::subset(std::span<const std::size_t> indices) const {
  TabularDataset out;
  out.X.resize(static_cast<Eigen::Index>(indices.size()), X.cols());
  out.feature_names = feature_names;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto i = indices[r];
    if (i >= rows()) throw InvalidInput(fmt::format("row index {} out of range", i));
    out.X.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(i));
    out.y.push_back(y[i]);
    if (!subjects.empty()) out.subjects.push_back(subjects[i]);
  }
  return out;
}

std::vector<std::size_t> TabularDataset::class_counts() const {
  std::vector<std::size_t> counts(kNumClasses, 0);
  for (auto c : y) ++counts[static_cast<std::size_t>(class_index(c))];
  return counts;
}

void ColumnStandardizer::fit(const Eigen::MatrixXd& X) {
  if (X.rows() < 1) throw InvalidInput("cannot standardize an empty matrix");
  means_ = X.colwise().mean().transpose();
  scales_.resize(X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const auto col = X.col(c).array();
    if (col.minCoeff() == col.maxCoeff()) {
      scales_(c) = 0.0;
      continue;
    }
    scales_(c) = std::sqrt((col - means_(c)).square().mean());
  }
  fitted_ = true;
}

Eigen::MatrixXd ColumnStandardizer::transform(const Eigen::MatrixXd& X) const {
  if (!fitted_) throw NotFitted("standardizer used before fit");
  if (X.cols() != means_.size()) throw InvalidInput("standardizer applied to a matrix of different width");
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    if (scales_(c) == 0.0) {
      out.col(c).setZero();
    } else {
      out.col(c) = (X.col(c).array() - means_(c)) / scales_(c);
    }
  }
  return out;
}

Eigen::MatrixXd ColumnStandardizer::fit_transform(const Eigen::MatrixXd& X) {
  fit(X);
  return transform(X);
}

StandardizedDataset zscore_feature_matrix(const TabularDataset& train) {
  if (train.rows() < 2) throw InvalidInput("z-score normalization needs at least two rows");
  StandardizedDataset out{train, {}};
  out.data.X = out.scaler.fit_transform(train.X);
  return out;
}

}  // namespace ioctx
