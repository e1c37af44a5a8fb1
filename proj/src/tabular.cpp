#include "ioctx/tabular.hpp"

#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace ioctx {

std::string_view to_string(TabularModelKind kind) {
  switch (kind) {
    case TabularModelKind::logistic: return "logistic";
    case TabularModelKind::ridge: return "ridge";
    case TabularModelKind::knn: return "knn";
    case TabularModelKind::gnb: return "gnb";
  }
  return "unknown";
}

std::vector<Context> TabularModel::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != dims()) {
    throw InvalidInput(fmt::format("model expects {} features, got {}", dims(), X.cols()));
  }
  std::vector<Context> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) out.push_back(predict_row(X.row(r)));
  return out;
}

void require_both_classes(const std::vector<Context>& y, std::string_view who) {
  const bool has_in = std::find(y.begin(), y.end(), Context::indoor) != y.end();
  const bool has_out = std::find(y.begin(), y.end(), Context::outdoor) != y.end();
  if (!has_in || !has_out) throw DegenerateTraining(fmt::format("{}: training data contains a single class", who));
}

// ---------------------------------------------------------------------------
// Logistic regression

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }
double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LogisticProblem {
  const Eigen::MatrixXd& X;
  Eigen::VectorXd target;  // 1 indoor, 0 outdoor
  Eigen::VectorXd weight;  // per-sample class weight
  double l2;
  double inv_n;

  Eigen::VectorXd margins(const Eigen::VectorXd& w, double b) const { return (X * w).array() + b; }

  double objective(const Eigen::VectorXd& w, double b) const {
    const Eigen::VectorXd z = margins(w, b);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) loss += weight(i) * (softplus(z(i)) - target(i) * z(i));
    return inv_n * (loss + 0.5 * l2 * w.squaredNorm());
  }
};

}  // namespace

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const std::vector<Context>& y, const LogisticConfig& cfg) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || X.rows() == 0) {
    throw InvalidInput("logistic: feature rows and labels differ in count");
  }
  if (!X.allFinite()) throw InvalidInput("logistic: non-finite feature values");
  if (!(cfg.l2_strength > 0)) throw InvalidInput("logistic: l2_strength must be positive");
  require_both_classes(y, "logistic");

  const auto n = X.rows();
  const auto d = X.cols();
  LogisticModel model;
  model.config_ = cfg;
  std::array<double, 2> counts{0, 0};
  for (auto c : y) counts[static_cast<std::size_t>(class_index(c))] += 1;
  if (cfg.balanced) {
    for (std::size_t c = 0; c < 2; ++c) model.class_weights_[c] = static_cast<double>(n) / (2.0 * counts[c]);
  }

  LogisticProblem prob{X, Eigen::VectorXd(n), Eigen::VectorXd(n), cfg.l2_strength, 1.0 / static_cast<double>(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(class_index(y[static_cast<std::size_t>(i)]));
    prob.target(i) = static_cast<double>(c);
    prob.weight(i) = model.class_weights_[c];
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  double f = prob.objective(w, b);
  const int max_cg = static_cast<int>(std::min<Eigen::Index>(2 * (d + 1), 250));

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const Eigen::VectorXd z = prob.margins(w, b);
    Eigen::VectorXd resid(n), curv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid(z(i));
      resid(i) = prob.weight(i) * (s - prob.target(i));
      curv(i) = prob.weight(i) * s * (1.0 - s);
    }
    const Eigen::VectorXd gw = prob.inv_n * (X.transpose() * resid + cfg.l2_strength * w);
    const double gb = prob.inv_n * resid.sum();
    const double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
    model.iterations_ = iter;
    if (gnorm <= cfg.tolerance) {
      model.converged_ = true;
      break;
    }

    auto hess = [&](const Eigen::VectorXd& vw, double vb, Eigen::VectorXd& hw, double& hb) {
      const Eigen::VectorXd t = curv.cwiseProduct((X * vw).array().matrix() + Eigen::VectorXd::Constant(n, vb));
      hw = prob.inv_n * (X.transpose() * t + cfg.l2_strength * vw);
      hb = prob.inv_n * t.sum();
    };

    // Conjugate gradient on H p = -g.
    Eigen::VectorXd pw = Eigen::VectorXd::Zero(d);
    double pb = 0.0;
    Eigen::VectorXd rw = -gw;
    double rb = -gb;
    Eigen::VectorXd sw = rw;
    double sb = rb;
    double rr = rw.squaredNorm() + rb * rb;
    const double cg_tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
    for (int k = 0; k < max_cg && std::sqrt(rr) > cg_tol; ++k) {
      Eigen::VectorXd hw;
      double hb = 0.0;
      hess(sw, sb, hw, hb);
      const double shs = sw.dot(hw) + sb * hb;
      if (shs <= 0) break;
      const double a = rr / shs;
      pw += a * sw;
      pb += a * sb;
      rw -= a * hw;
      rb -= a * hb;
      const double rr_new = rw.squaredNorm() + rb * rb;
      sw = rw + (rr_new / rr) * sw;
      sb = rb + (rr_new / rr) * sb;
      rr = rr_new;
    }
    if (pw.squaredNorm() + pb * pb == 0.0) {
      pw = -gw;
      pb = -gb;
    }

    const double slope = gw.dot(pw) + gb * pb;
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd w_try = w + step * pw;
      const double b_try = b + step * pb;
      const double f_try = prob.objective(w_try, b_try);
      if (f_try <= f + 1e-4 * step * slope) {
        w = w_try;
        b = b_try;
        f = f_try;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    model.iterations_ = iter + 1;
  }
  model.weights_ = std::move(w);
  model.intercept_ = b;
  return model;
}

LogisticModel fit_logistic(const TabularDataset& data, const LogisticConfig& cfg) {
  data.validate();
  return fit_logistic(data.X, data.y, cfg);
}

double LogisticModel::decision(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return row.dot(weights_.transpose()) + intercept_;
}

Context LogisticModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  return decision(row) > 0.0 ? Context::indoor : Context::outdoor;
}

nlohmann::json LogisticModel::summary() const {
  return {{"kind", "logistic"},
          {"l2_strength", config_.l2_strength},
          {"max_iter", config_.max_iter},
          {"balanced", config_.balanced},
          {"class_weights", {{"outdoor", class_weights_[0]}, {"indoor", class_weights_[1]}}},
          {"coefficients", std::vector<double>(weights_.data(), weights_.data() + weights_.size())},
          {"intercept", intercept_},
          {"iterations", iterations_},
          {"converged", converged_}};
}

// ---------------------------------------------------------------------------
// k nearest neighbors

KnnModel fit_knn(const TabularDataset& data, int k) {
  data.validate();
  if (k <= 0) throw InvalidInput("knn: k must be positive");
  if (static_cast<std::size_t>(k) > data.rows()) throw InvalidInput("knn: k exceeds the number of training rows");
  KnnModel model;
  model.X_ = data.X;
  model.y_ = data.y;
  model.k_ = k;
  return model;
}

Context KnnModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const auto n = static_cast<std::size_t>(X_.rows());
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = {(X_.row(static_cast<Eigen::Index>(i)) - row).squaredNorm(), i};
  }
  const auto k = static_cast<std::size_t>(k_);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::array<int, 2> votes{0, 0};
  std::array<double, 2> dist_sum{0, 0};
  for (std::size_t j = 0; j < k; ++j) {
    const auto c = static_cast<std::size_t>(class_index(y_[dist[j].second]));
    ++votes[c];
    dist_sum[c] += std::sqrt(dist[j].first);
  }
  if (votes[0] != votes[1]) return votes[1] > votes[0] ? Context::indoor : Context::outdoor;
  const double mean0 = dist_sum[0] / votes[0];
  const double mean1 = dist_sum[1] / votes[1];
  if (mean0 != mean1) return mean1 < mean0 ? Context::indoor : Context::outdoor;
  return y_[dist[0].second];
}

nlohmann::json KnnModel::summary() const {
  return {{"kind", "knn"}, {"k", k_}, {"weights", "uniform"}, {"n_train", X_.rows()}};
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

GaussianNbModel fit_gnb(const TabularDataset& data) {
  data.validate();
  require_both_classes(data.y, "gnb");
  GaussianNbModel model;
  const auto d = data.X.cols();
  const double n = static_cast<double>(data.rows());

  double max_var = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const auto col = data.X.col(c).array();
    max_var = std::max(max_var, (col - col.mean()).square().mean());
  }
  model.epsilon_ = kGnbVarianceSmoothing * (max_var > 0.0 ? max_var : 1.0);

  for (std::size_t cls = 0; cls < 2; ++cls) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (static_cast<std::size_t>(class_index(data.y[i])) == cls) rows.push_back(static_cast<Eigen::Index>(i));
    }
    const double m = static_cast<double>(rows.size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (auto r : rows) mean += data.X.row(r).transpose();
    mean /= m;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
    for (auto r : rows) var += (data.X.row(r).transpose() - mean).array().square().matrix();
    var /= m;
    model.means_[cls] = mean;
    model.vars_[cls] = var.array() + model.epsilon_;
    model.priors_[cls] = m / n;
  }
  return model;
}

std::array<double, 2> GaussianNbModel::log_posterior(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  std::array<double, 2> joint{};
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const auto& mu = means_[cls];
    const auto& var = vars_[cls];
    double ll = std::log(priors_[cls]);
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      const double diff = row(j) - mu(j);
      ll += -0.5 * std::log(2.0 * std::numbers::pi * var(j)) - diff * diff / (2.0 * var(j));
    }
    joint[cls] = ll;
  }
  const double hi = std::max(joint[0], joint[1]);
  const double norm = hi + std::log(std::exp(joint[0] - hi) + std::exp(joint[1] - hi));
  return {joint[0] - norm, joint[1] - norm};
}

Context GaussianNbModel::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const auto lp = log_posterior(row);
  return lp[1] > lp[0] ? Context::indoor : Context::outdoor;
}

nlohmann::json GaussianNbModel::summary() const {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {{"kind", "gnb"},
          {"priors", {{"outdoor", priors_[0]}, {"indoor", priors_[1]}}},
          {"means", {{"outdoor", vec(means_[0])}, {"indoor", vec(means_[1])}}},
          {"variances", {{"outdoor", vec(vars_[0])}, {"indoor", vec(vars_[1])}}},
          {"epsilon", epsilon_}};
}

}  // namespace ioctx
