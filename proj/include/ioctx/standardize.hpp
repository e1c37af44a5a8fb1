#pragma once

#include "ioctx/tabular_dataset.hpp"

#include <Eigen/Dense>

namespace ioctx {

// Per-column z-score with statistics from the fitting rows only. Columns with
// zero variance map to 0.
class ColumnStandardizer {
 public:
  void fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::MatrixXd fit_transform(const Eigen::MatrixXd& X);

  bool fitted() const { return fitted_; }
  const Eigen::VectorXd& means() const { return means_; }
  // Population standard deviations; 0 for constant columns.
  const Eigen::VectorXd& scales() const { return scales_; }

 private:
  Eigen::VectorXd means_;
  Eigen::VectorXd scales_;
  bool fitted_ = false;
};

struct StandardizedDataset {
  TabularDataset data;
  ColumnStandardizer scaler;
};

// Standardizes the (training) dataset; apply `scaler` to validation rows.
StandardizedDataset zscore_feature_matrix(const TabularDataset& train);

}  // namespace ioctx
