#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "ioctx/error.hpp"
#include "ioctx/standardize.hpp"
#include "ioctx/tabular.hpp"

#include <cmath>

using namespace ioctx;

namespace {

TabularDataset blobs(std::size_t n, std::size_t d, double shift, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  TabularDataset t;
  t.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const bool indoor = i % 3 != 0;
    t.y.push_back(indoor ? Context::indoor : Context::outdoor);
    t.subjects.push_back("S1");
    for (std::size_t j = 0; j < d; ++j) t.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(rng) + (indoor ? shift : 0.0) * (j == 0);
  }
  for (std::size_t j = 0; j < d; ++j) t.feature_names.push_back("f" + std::to_string(j));
  return t;
}

}  // namespace

TEST_CASE("column standardizer") {
  Eigen::MatrixXd X(4, 2);
  X << 1, 5, 2, 5, 3, 5, 4, 5;
  ColumnStandardizer sc;
  const auto Z = sc.fit_transform(X);
  CHECK(sc.means()(0) == doctest::Approx(2.5));
  CHECK(sc.scales()(1) == 0.0);
  CHECK(Z.col(0).mean() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(Z.col(0).squaredNorm() / 4 == doctest::Approx(1.0));
  CHECK(Z.col(1).isZero());
  ColumnStandardizer unfitted;
  CHECK_THROWS_AS((void)unfitted.transform(X), NotFitted);
}

TEST_CASE("logistic regression reaches a stationary point of its objective") {
  const auto data = blobs(120, 3, 2.0, 4);
  LogisticConfig cfg;
  cfg.tolerance = 1e-10;
  const auto m = fit_logistic(data, cfg);
  CHECK(m.converged());
  // Balanced weights n / (2 n_c).
  CHECK(m.class_weights()[0] == doctest::Approx(120.0 / (2 * 40)));
  CHECK(m.class_weights()[1] == doctest::Approx(120.0 / (2 * 80)));

  // Gradient of sum_i c_i * logloss_i / n + 0.5 * lambda * |w|^2 / n.
  Eigen::VectorXd gw = cfg.l2_strength * m.weights();
  double gb = 0.0;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    const double z = m.decision(data.X.row(i));
    const double t = data.y[static_cast<std::size_t>(i)] == Context::indoor ? 1.0 : 0.0;
    const double c = m.class_weights()[static_cast<std::size_t>(class_index(data.y[static_cast<std::size_t>(i)]))];
    const double r = c * (1.0 / (1.0 + std::exp(-z)) - t);
    gw += r * data.X.row(i).transpose();
    gb += r;
  }
  CHECK(gw.norm() / 120.0 < 1e-6);
  CHECK(std::abs(gb) / 120.0 < 1e-6);

  // The shifted feature carries the signal.
  CHECK(m.weights()(0) > 0.0);
  const auto pred = m.predict(data.X);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == data.y[i];
  CHECK(hits > 100);
}

TEST_CASE("single-class training is degenerate") {
  auto data = blobs(10, 2, 0.0, 1);
  for (auto& y : data.y) y = Context::indoor;
  CHECK_THROWS_AS(fit_logistic(data), DegenerateTraining);
  CHECK_THROWS_AS(fit_ridge_classifier(data), DegenerateTraining);
  CHECK_THROWS_AS(fit_gnb(data), DegenerateTraining);
}

TEST_CASE("ridge LOO errors equal brute-force refits") {
  for (std::size_t d : {3u, 8u, 35u}) {
    const auto data = blobs(20, d, 1.0, 10 + d);
    const auto alphas = default_ridge_alphas();
    const auto m = fit_ridge_classifier(data, alphas);
    std::vector<double> ref;
    for (double a : alphas) ref.push_back(oracle::ridge_loo_refit(data.X, data.y, a));
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      CHECK(m.loo_errors()[a] == doctest::Approx(ref[a]).epsilon(1e-7));
    }
    CHECK(m.alpha() == alphas[oracle::argmin(ref)]);
  }
}

TEST_CASE("ridge alpha validation") {
  const auto data = blobs(20, 2, 1.0, 3);
  CHECK_THROWS_AS(fit_ridge_classifier(data, {1.0}), InvalidInput);
  CHECK_THROWS_AS(fit_ridge_classifier(data, {1.0, -1.0}), InvalidInput);
  const auto a = log_spaced(1e-3, 1e3, 10);
  CHECK(a.front() == doctest::Approx(1e-3));
  CHECK(a.back() == doctest::Approx(1e3));
  CHECK(a[3] == doctest::Approx(0.1));
}

TEST_CASE("knn agrees with an exhaustive neighbor scan") {
  const auto train = blobs(60, 3, 1.5, 21);
  const auto test = blobs(40, 3, 1.5, 22);
  for (int k : {1, 3, 5, 7}) {
    const auto m = fit_knn(train, k);
    const auto pred = m.predict(test.X);
    for (Eigen::Index q = 0; q < test.X.rows(); ++q) {
      std::vector<std::pair<double, std::size_t>> dist;
      for (Eigen::Index i = 0; i < train.X.rows(); ++i) {
        dist.push_back({(train.X.row(i) - test.X.row(q)).norm(), static_cast<std::size_t>(i)});
      }
      std::sort(dist.begin(), dist.end());
      std::array<int, 2> votes{};
      std::array<double, 2> dsum{};
      for (int j = 0; j < k; ++j) {
        const int c = class_index(train.y[dist[static_cast<std::size_t>(j)].second]);
        ++votes[static_cast<std::size_t>(c)];
        dsum[static_cast<std::size_t>(c)] += dist[static_cast<std::size_t>(j)].first;
      }
      Context expect;
      if (votes[0] != votes[1]) {
        expect = votes[1] > votes[0] ? Context::indoor : Context::outdoor;
      } else {
        expect = dsum[1] / votes[1] < dsum[0] / votes[0] ? Context::indoor : Context::outdoor;
      }
      CHECK(pred[static_cast<std::size_t>(q)] == expect);
    }
  }
  CHECK_THROWS_AS(fit_knn(train, 0), InvalidInput);
}

TEST_CASE("gnb posteriors match the density-product oracle") {
  const auto train = blobs(50, 4, 1.0, 31);
  const auto test = blobs(20, 4, 1.0, 32);
  const auto m = fit_gnb(train);
  for (Eigen::Index q = 0; q < test.X.rows(); ++q) {
    const auto lp = m.log_posterior(test.X.row(q));
    const auto ref = oracle::gnb_posterior(train.X, train.y, test.X.row(q), m.epsilon());
    CHECK(std::abs(std::exp(lp[0]) - ref[0]) < 1e-9);
    CHECK(std::abs(std::exp(lp[1]) - ref[1]) < 1e-9);
  }
  CHECK(m.prior(Context::outdoor) == doctest::Approx(17.0 / 50.0));
}

TEST_CASE("gnb tolerates a constant feature") {
  auto data = blobs(30, 2, 2.0, 5);
  data.X.col(1).setConstant(4.0);
  const auto m = fit_gnb(data);
  CHECK(m.variances(Context::indoor)(1) > 0.0);
  const auto lp = m.log_posterior(data.X.row(0));
  CHECK(std::isfinite(lp[0]));
  CHECK(std::isfinite(lp[1]));
}

TEST_CASE("fitters reject non-finite input") {
  auto data = blobs(10, 2, 1.0, 6);
  data.X(3, 1) = NAN;
  CHECK_THROWS_AS(fit_gnb(data), InvalidInput);
  CHECK_THROWS_AS(fit_logistic(data), InvalidInput);
  CHECK_THROWS_AS(fit_knn(data, 3), InvalidInput);
}
