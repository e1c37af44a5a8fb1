#pragma once

#include "ioctx/standardize.hpp"
#include "ioctx/tabular_dataset.hpp"
#include "ioctx/types.hpp"

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace ioctx {

enum class TabularModelKind { logistic, ridge, knn, gnb };

std::string_view to_string(TabularModelKind kind);

// A trained, immutable feature-based classifier. predict() is safe to call
// concurrently.
class TabularModel {
 public:
  virtual ~TabularModel() = default;

  virtual TabularModelKind kind() const = 0;
  virtual Context predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const = 0;
  virtual nlohmann::json summary() const = 0;
  virtual Eigen::Index dims() const = 0;

  std::vector<Context> predict(const Eigen::MatrixXd& X) const;
};

// Throws DegenerateTraining unless both classes are present.
void require_both_classes(const std::vector<Context>& y, std::string_view who);

// ---------------------------------------------------------------------------
// Logistic regression

struct LogisticConfig {
  double l2_strength = 1.0;  // penalty 0.5 * l2_strength * |w|^2; intercept unpenalized
  int max_iter = 1000;
  bool balanced = true;      // class weight n / (2 n_c)
  double tolerance = 1e-6;   // on the gradient norm of the per-sample objective
};

class LogisticModel final : public TabularModel {
 public:
  TabularModelKind kind() const override { return TabularModelKind::logistic; }
  Context predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;
  nlohmann::json summary() const override;
  Eigen::Index dims() const override { return weights_.size(); }

  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  // Indexed by class_index().
  const std::array<double, 2>& class_weights() const { return class_weights_; }
  int iterations() const { return iterations_; }
  bool converged() const { return converged_; }

 private:
  friend LogisticModel fit_logistic(const TabularDataset&, const LogisticConfig&);
  friend LogisticModel fit_logistic(const Eigen::MatrixXd&, const std::vector<Context>&, const LogisticConfig&);
  Eigen::VectorXd weights_;
  double intercept_ = 0.0;
  std::array<double, 2> class_weights_{1.0, 1.0};
  int iterations_ = 0;
  bool converged_ = false;
  LogisticConfig config_;
};

// Weighted L2 logistic loss minimized by Newton-CG with backtracking.
LogisticModel fit_logistic(const TabularDataset& data, const LogisticConfig& cfg = {});
// Same solver on a bare matrix; used by the symbolic classifier.
LogisticModel fit_logistic(const Eigen::MatrixXd& X, const std::vector<Context>& y, const LogisticConfig& cfg = {});

// ---------------------------------------------------------------------------
// Ridge classifier with closed-form leave-one-out alpha selection

// `count` values log-spaced over [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> default_ridge_alphas();  // 10 values over [1e-3, 1e3]

class RidgeModel final : public TabularModel {
 public:
  TabularModelKind kind() const override { return TabularModelKind::ridge; }
  Context predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;
  nlohmann::json summary() const override;
  Eigen::Index dims() const override { return weights_.size(); }

  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  double alpha() const { return alpha_; }
  const std::vector<double>& alphas() const { return alphas_; }
  // Mean squared leave-one-out residual per alpha.
  const std::vector<double>& loo_errors() const { return loo_errors_; }
  const Eigen::VectorXd& weights() const { return weights_; }  // in standardized space
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend RidgeModel fit_ridge_classifier(const Eigen::MatrixXd&, const std::vector<Context>&,
                                         const std::vector<double>&);
  ColumnStandardizer scaler_;
  Eigen::VectorXd weights_;
  double intercept_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> alphas_;
  std::vector<double> loo_errors_;
  std::vector<std::string> warnings_;
};

// Targets are +1 (indoor) / -1 (outdoor); features are standardized on the
// training rows; the intercept is unpenalized.
RidgeModel fit_ridge_classifier(const TabularDataset& data, const std::vector<double>& alphas = default_ridge_alphas());
RidgeModel fit_ridge_classifier(const Eigen::MatrixXd& X, const std::vector<Context>& y,
                                const std::vector<double>& alphas = default_ridge_alphas());

// ---------------------------------------------------------------------------
// k nearest neighbors

class KnnModel final : public TabularModel {
 public:
  TabularModelKind kind() const override { return TabularModelKind::knn; }
  Context predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;
  nlohmann::json summary() const override;
  Eigen::Index dims() const override { return X_.cols(); }

  int k() const { return k_; }

 private:
  friend KnnModel fit_knn(const TabularDataset&, int);
  Eigen::MatrixXd X_;
  std::vector<Context> y_;
  int k_ = 5;
};

// Uniform-weight majority of the k Euclidean neighbors. Vote ties go to the
// class with the smaller mean neighbor distance; distance ties to the lower
// training index.
KnnModel fit_knn(const TabularDataset& data, int k = 5);

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

class GaussianNbModel final : public TabularModel {
 public:
  TabularModelKind kind() const override { return TabularModelKind::gnb; }
  Context predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const override;
  nlohmann::json summary() const override;
  Eigen::Index dims() const override { return means_[0].size(); }

  // Normalized log posteriors indexed by class_index().
  std::array<double, 2> log_posterior(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  const Eigen::VectorXd& means(Context c) const { return means_[static_cast<std::size_t>(class_index(c))]; }
  const Eigen::VectorXd& variances(Context c) const { return vars_[static_cast<std::size_t>(class_index(c))]; }
  double prior(Context c) const { return priors_[static_cast<std::size_t>(class_index(c))]; }
  double epsilon() const { return epsilon_; }

 private:
  friend GaussianNbModel fit_gnb(const TabularDataset&);
  std::array<Eigen::VectorXd, 2> means_;
  std::array<Eigen::VectorXd, 2> vars_;
  std::array<double, 2> priors_{0.5, 0.5};
  double epsilon_ = 0.0;
};

inline constexpr double kGnbVarianceSmoothing = 1e-9;

// Per-class Gaussians; every variance gets epsilon = 1e-9 * (largest feature
// variance) added so constant features stay usable.
GaussianNbModel fit_gnb(const TabularDataset& data);

}  // namespace ioctx
