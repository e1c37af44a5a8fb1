#pragma once

#include "ioctx/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ioctx {

// Rows are samples. NaN marks a missing value; fitters reject it, and the
// campaign runner resolves it per fold before fitting.
struct TabularDataset {
  Eigen::MatrixXd X;
  std::vector<Context> y;
  std::vector<std::string> subjects;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }

  // Shape consistency; with require_finite also rejects NaN/inf.
  void validate(bool require_finite = true) const;
  TabularDataset subset(std::span<const std::size_t> indices) const;
  std::vector<std::size_t> class_counts() const;
};

}  // namespace ioctx
