#include "ioctx/tabular.hpp"

#include "ioctx/error.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace ioctx {

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0) || !(hi >= lo)) throw InvalidInput("log_spaced: invalid range");
  std::vector<double> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out.push_back(std::pow(10.0, a + t * (b - a)));
  }
  return out;
}

std::vector<double> default_ridge_alphas() { return log_spaced(1e-3, 1e3, 10); }

RidgeModel fit_ridge_classifier(const Eigen::MatrixXd& X, const std::vector<Context>& y,
                                const std::vector<double>& alphas) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || X.rows() < 2) {
    throw InvalidInput("ridge: need at least two rows with matching labels");
  }
  if (alphas.size() < 2) throw InvalidInput("ridge: need at least two candidate alphas");
  for (double a : alphas) {
    if (!(a > 0)) throw InvalidInput("ridge: alphas must be positive");
  }
  if (!X.allFinite()) throw InvalidInput("ridge: non-finite feature values");
  require_both_classes(y, "ridge");

  RidgeModel model;
  model.alphas_ = alphas;
  const Eigen::MatrixXd Z = model.scaler_.fit_transform(X);  // centered columns
  const auto n = Z.rows();
  const auto d = Z.cols();

  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t(i) = y[static_cast<std::size_t>(i)] == Context::indoor ? 1.0 : -1.0;
  const double t_mean = t.mean();
  const Eigen::VectorXd tc = t.array() - t_mean;

  // Spectral form of the hat matrix: H = 11'/n + P diag(s / (s + alpha)) P' with
  // P orthonormal in sample space. Whichever Gram side is smaller is decomposed.
  Eigen::MatrixXd P;       // n x r, orthonormal columns
  Eigen::VectorXd s;       // eigenvalues of Z Z'
  Eigen::MatrixXd V;       // d x r feature-space directions (only when d < n)
  const bool sample_side = n <= d;
  if (sample_side) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Z * Z.transpose());
    P = eig.eigenvectors();
    s = eig.eigenvalues().cwiseMax(0.0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Z.transpose() * Z);
    V = eig.eigenvectors();
    s = eig.eigenvalues().cwiseMax(0.0);
    P = Z * V;
    for (Eigen::Index k = 0; k < P.cols(); ++k) {
      const double norm = std::sqrt(s(k));
      if (norm > 0) P.col(k) /= norm;
      else P.col(k).setZero();
    }
  }
  const Eigen::VectorXd proj = P.transpose() * tc;
  const Eigen::MatrixXd P2 = P.array().square();

  model.loo_errors_.assign(alphas.size(), std::numeric_limits<double>::infinity());
  std::size_t best = alphas.size();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const Eigen::VectorXd shrink = s.array() / (s.array() + alphas[a]);
    const Eigen::VectorXd fitted = (P * shrink.cwiseProduct(proj)).array() + t_mean;
    const Eigen::VectorXd h = (P2 * shrink).array() + 1.0 / static_cast<double>(n);
    double err = 0.0;
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = 1.0 - h(i);
      if (!(std::abs(denom) > 1e-12)) {
        ok = false;
        break;
      }
      const double e = (t(i) - fitted(i)) / denom;
      err += e * e;
    }
    if (!ok || !std::isfinite(err)) continue;
    model.loo_errors_[a] = err / static_cast<double>(n);
    if (best == alphas.size() || model.loo_errors_[a] < model.loo_errors_[best]) best = a;
  }
  if (best == alphas.size()) {
    best = static_cast<std::size_t>(std::max_element(alphas.begin(), alphas.end()) - alphas.begin());
    model.warnings_.push_back("leave-one-out errors undefined for every alpha; using the largest alpha");
  }
  model.alpha_ = alphas[best];

  const Eigen::VectorXd inv = (s.array() + model.alpha_).inverse();
  if (sample_side) {
    model.weights_ = Z.transpose() * (P * inv.cwiseProduct(proj));
  } else {
    model.weights_ = V * inv.cwiseProduct(V.transpose() * (Z.transpose() * tc));
  }
  model.intercept_ = t_mean;
  return model;
}

RidgeModel fit_ridge_classifier(const TabularDataset& data, const std::vector<double>& alphas) {
  data.validate();
  return fit_ridge_classifier(data.X, data.y, alphas);
}

double RidgeModel::decision(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const auto& mu = scaler_.means();
  const auto& sc = scaler_.scales();
  double v = intercept_;
  for (Eigen::Index j = 0; j < weights_.size(); ++j) {
    if (sc(j) != 0.0) v += weights_(j) * (row(j) - mu(j)) / sc(j);
  }
  return v;
}

Context RidgeModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return decision(row) > 0.0 ? Context::indoor : Context::outdoor;
}

nlohmann::json RidgeModel::summary() const {
  nlohmann::json j = {{"kind", "ridge"},
                      {"alpha", alpha_},
                      {"alphas", alphas_},
                      {"intercept", intercept_},
                      {"n_features", weights_.size()},
                      {"warnings", warnings_}};
  std::vector<double> loo;
  for (double e : loo_errors_) loo.push_back(std::isfinite(e) ? e : -1.0);
  j["loo_errors"] = loo;
  if (weights_.size() <= 100) j["coefficients"] = std::vector<double>(weights_.data(), weights_.data() + weights_.size());
  return j;
}

}  // namespace ioctx
