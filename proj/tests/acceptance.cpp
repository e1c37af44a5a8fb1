// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include "oracles.hpp"

#include "ioctx/dtw.hpp"
#include "ioctx/evaluation.hpp"
#include "ioctx/minirocket.hpp"
#include "ioctx/pipeline.hpp"
#include "ioctx/rocket.hpp"
#include "ioctx/signal.hpp"
#include "ioctx/symbolic.hpp"
#include "ioctx/synthetic.hpp"
#include "ioctx/tabular.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

using namespace ioctx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double elapsed, double limit_s) {
  Outcome out = o;
  if (limit_s > 0) out.require(elapsed < limit_s, fmt::format("runtime {:.1f} s over the {:.0f} s budget", elapsed, limit_s));
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), elapsed,
              out.detail.empty() ? "" : " | ", out.detail.c_str());
  std::fflush(stdout);
}

template <typename Fn>
void run(int id, const std::string& name, double limit_s, Fn&& fn) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  report(id, name, o, seconds_since(t0), limit_s);
}

// DMO-window distribution per subject: (indoor, outdoor).
const std::vector<std::pair<int, int>> kTableShape = {{64, 0}, {4, 7},   {0, 52}, {0, 1}, {65, 0},
                                                       {26, 0}, {55, 0}, {22, 10}, {5, 0}};

void table_shaped(std::vector<Context>& y, std::vector<std::string>& subjects) {
  for (std::size_t s = 0; s < kTableShape.size(); ++s) {
    for (int i = 0; i < kTableShape[s].first; ++i) {
      y.push_back(Context::indoor);
      subjects.push_back(subject_name(static_cast<int>(s)));
    }
    for (int i = 0; i < kTableShape[s].second; ++i) {
      y.push_back(Context::outdoor);
      subjects.push_back(subject_name(static_cast<int>(s)));
    }
  }
}

Outcome majority_floor() {
  Outcome o;
  std::vector<Context> y;
  std::vector<std::string> subjects;
  table_shaped(y, subjects);
  o.require(y.size() == 311, "dataset is not 241/70");

  const std::vector<Context> pred(y.size(), Context::indoor);
  const auto m = compute_metrics(y, pred);
  auto near = [](double a, double b) { return std::abs(a - b) <= 0.001; };
  o.require(near(m.accuracy, 0.775), fmt::format("accuracy {:.4f}", m.accuracy));
  o.require(near(m.precision, 0.387), fmt::format("precision {:.4f}", m.precision));
  o.require(near(m.recall, 0.500), fmt::format("recall {:.4f}", m.recall));
  o.require(near(m.f1, 0.436), fmt::format("f1 {:.4f}", m.f1));

  // Same floor as a fold mean under stratified 5-fold.
  const auto plan = make_stratified_folds(y, 5, 0);
  std::vector<double> acc, prec, rec, f1;
  for (const auto& f : plan.folds) {
    std::vector<Context> yt;
    for (auto i : f.test) yt.push_back(y[i]);
    const auto fm = compute_metrics(yt, std::vector<Context>(yt.size(), Context::indoor));
    acc.push_back(fm.accuracy);
    prec.push_back(fm.precision);
    rec.push_back(fm.recall);
    f1.push_back(fm.f1);
  }
  const auto a = mean_std(acc), p = mean_std(prec), r = mean_std(rec), f = mean_std(f1);
  o.require(near(a.mean, 0.775) && near(p.mean, 0.387) && near(r.mean, 0.5) && near(f.mean, 0.436),
            "fold means off the floor");
  o.detail = o.pass ? fmt::format("acc {:.3f} prec {:.3f} rec {:.3f} f1 {:.3f}; 5-fold {}", m.accuracy, m.precision,
                                  m.recall, m.f1, fmt::format("{:.1f}±{:.1f}", 100 * a.mean, 100 * a.std))
                    : o.detail;
  return o;
}

Outcome dtw_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> len(1, 60);
  std::vector<std::vector<double>> series;
  std::vector<Context> labels;
  for (int i = 0; i < 25; ++i) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = u(rng);
    series.push_back(v);
    labels.push_back(i % 2 ? Context::indoor : Context::outdoor);
  }
  // Each series is a query against the other 24.
  std::size_t mismatches = 0;
  for (std::size_t q = 0; q < series.size(); ++q) {
    SeriesDataset train, test;
    train.length_mode = test.length_mode = LengthMode::variable;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (i == q) continue;
      train.series.emplace_back(series[i]);
      train.y.push_back(labels[i]);
      train.subjects.push_back("S");
      index.push_back(i);
    }
    test.series.emplace_back(series[q]);
    test.y.push_back(labels[q]);
    test.subjects.push_back("S");
    const auto pred = knn1_dtw_predict(train, test)[0];

    std::size_t best = 0;
    double best_d = oracle::dtw_matrix(series[q], series[index[0]]);
    for (std::size_t k = 1; k < index.size(); ++k) {
      const double d = oracle::dtw_matrix(series[q], series[index[k]]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    mismatches += pred != labels[index[best]];
  }
  o.require(mismatches == 0, fmt::format("{} 1NN predictions differ from the brute-force scan", mismatches));

  // Every pair of series of length <= 5 over {-1, 0, 2}.
  const double symbols[] = {-1.0, 0.0, 2.0};
  std::vector<std::vector<double>> all;
  for (std::size_t n = 1; n <= 5; ++n) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> s(n);
      std::size_t c = code;
      for (std::size_t i = 0; i < n; ++i, c /= 3) s[i] = symbols[c % 3];
      all.push_back(s);
    }
  }
  std::size_t pairs = 0, wrong = 0;
  for (const auto& a : all) {
    for (const auto& b : all) {
      ++pairs;
      wrong += dtw_distance(a, b) != oracle::dtw_enumerate(a, b);
    }
  }
  o.require(wrong == 0, fmt::format("{} of {} pairs differ from path enumeration", wrong, pairs));
  if (o.pass) o.detail = fmt::format("25/25 1NN queries match; {} enumerated pairs exact", pairs);
  return o;
}

Outcome kernel_contracts() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  SeriesDataset data;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> v(6000);
    double walk = 0.0;
    for (auto& x : v) {
      walk += 0.05 * g(rng);
      x = walk + 0.2 * g(rng);
    }
    data.series.emplace_back(std::move(v));
    data.y.push_back(i % 4 == 0 ? Context::outdoor : Context::indoor);
    data.subjects.push_back("S");
  }

  const auto bank = generate_rocket_kernels(6000, kRocketDefaultKernels, 11);
  const auto rocket = rocket_transform(data, bank, 1).features;
  o.require(rocket.cols() == 20000, fmt::format("rocket emitted {} features", rocket.cols()));
  bool ppv_ok = true;
  for (Eigen::Index j = 0; j < rocket.X.cols(); j += 2) {
    ppv_ok &= rocket.X.col(j).minCoeff() >= 0.0 && rocket.X.col(j).maxCoeff() <= 1.0;
  }
  o.require(ppv_ok, "rocket PPV outside [0, 1]");

  MiniRocketConfig mcfg;
  mcfg.seed = 11;
  const auto params = fit_minirocket(data, mcfg);
  const auto mini = minirocket_transform(data, params, 1);
  o.require(mini.cols() == 9996, fmt::format("minirocket emitted {} features", mini.cols()));
  o.require(mini.cols() % 84 == 0 && mini.cols() <= 10000, "minirocket feature count off the 84 grid");
  o.require(params.dilations.size() <= 32, fmt::format("{} dilations per kernel", params.dilations.size()));

  // Fresh banks and fits from the same seed reproduce the features bit for bit.
  std::vector<std::size_t> subset{0, 57, 133, 199};
  const auto sub = data.subset(subset);
  const auto rocket2 = rocket_transform(sub, generate_rocket_kernels(6000, kRocketDefaultKernels, 11), 1).features;
  const auto mini2 = minirocket_transform(sub, fit_minirocket(data, mcfg), 1);
  bool same = true;
  for (std::size_t r = 0; r < subset.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(subset[r]);
    const auto k = static_cast<Eigen::Index>(r);
    same &= rocket2.X.row(k) == rocket.X.row(i);
    same &= mini2.X.row(k) == mini.X.row(i);
  }
  o.require(same, "transforms are not reproducible under a fixed seed");
  if (o.pass) {
    o.detail = fmt::format("rocket 20000 features, minirocket {} features over {} dilations", mini.cols(),
                           params.dilations.size());
  }
  return o;
}

struct Cohort {
  std::vector<SubjectScenario> scenarios;
  std::vector<ContextLabelStream> labels;
  double seconds = 0.0;
};

Cohort make_cohort(std::uint64_t seed) {
  const auto t0 = Clock::now();
  Cohort c;
  c.scenarios = generate_scenario(skewed_cohort_config(seed));
  for (const auto& sc : c.scenarios) {
    c.labels.push_back(label_recording(sc.gps, sc.imu.start_time, static_cast<int>(sc.imu.duration_s())));
  }
  c.seconds = seconds_since(t0);
  return c;
}

Outcome end_to_end_gap(const Cohort& cohort) {
  Outcome o;
  std::vector<SubjectArtifacts> subjects;
  for (std::size_t s = 0; s < cohort.scenarios.size(); ++s) {
    subjects.push_back(process_subject(cohort.scenarios[s].imu, cohort.labels[s]));
  }
  RunConfig rocket;
  rocket.dataset = DatasetKind::bout_series;
  rocket.channel = ChannelKind::magnitude;
  rocket.length = LengthHandling::pad;
  rocket.model = ModelKind::rocket;
  rocket.rocket_kernels = kRocketDefaultKernels;
  rocket.folds = FoldKind::stratified;
  rocket.k = 5;
  rocket.seed = 1;
  const auto r = train_eval(rocket, subjects);

  RunConfig gnb;
  gnb.dataset = DatasetKind::window_dmo;
  gnb.model = ModelKind::gnb;
  gnb.folds = FoldKind::stratified;
  gnb.k = 5;
  gnb.seed = 1;
  const auto g = train_eval(gnb, subjects);

  o.require(r.accuracy.mean >= 0.95, fmt::format("rocket accuracy {:.3f}", r.accuracy.mean));
  o.require(r.f1.mean >= 0.90, fmt::format("rocket macro F1 {:.3f}", r.f1.mean));
  o.require(g.f1.mean <= r.f1.mean - 0.10, fmt::format("gnb macro F1 {:.3f} within 0.10 of rocket", g.f1.mean));
  std::size_t bouts = 0;
  for (const auto& f : r.folds) bouts += f.test_size;
  const std::string summary =
      fmt::format("rocket on {} bouts acc {:.1f}±{:.1f} F1 {:.1f}±{:.1f}; gnb F1 {:.1f}±{:.1f}", bouts,
                  100 * r.accuracy.mean, 100 * r.accuracy.std, 100 * r.f1.mean, 100 * r.f1.std, 100 * g.f1.mean,
                  100 * g.f1.std);
  o.detail = o.pass ? summary : o.detail + " (" + summary + ")";
  return o;
}

Outcome labeling_fidelity(const std::vector<const Cohort*>& cohorts) {
  Outcome o;
  double worst_second = 1.0;
  std::size_t windows = 0, agree = 0, silent = 0;
  for (const auto* cohort : cohorts) {
    for (std::size_t s = 0; s < cohort->scenarios.size(); ++s) {
      const auto& sc = cohort->scenarios[s];
      const auto& labels = cohort->labels[s];
      for (const auto& e : sc.episodes) silent += e.gps_silent;
      std::size_t same = 0;
      for (std::size_t t = 0; t < labels.probs.size(); ++t) same += labels.probs[t] == sc.truth.probs[t];
      const double rate = static_cast<double>(same) / static_cast<double>(labels.probs.size());
      worst_second = std::min(worst_second, rate);
      o.require(rate >= 0.99, fmt::format("{} per-second agreement {:.4f}", sc.subject_id, rate));

      auto wins = chunk_windows(sc.imu, 60);
      for (const auto& w : wins) {
        const auto got = aggregate_window_label(w, labels);
        const auto truth = aggregate_window_label(w, sc.truth);
        if (!got.label || !truth.label) continue;
        ++windows;
        agree += *got.label == *truth.label;
      }
    }
  }
  o.require(silent > 0, "no GPS-silent indoor dwells in the scenarios");
  const double wrate = windows ? static_cast<double>(agree) / static_cast<double>(windows) : 0.0;
  o.require(wrate >= 0.98, fmt::format("window agreement {:.4f}", wrate));
  if (o.pass) {
    o.detail = fmt::format("worst subject {:.4f} per second; windows {}/{} = {:.4f}; {} silent dwells", worst_second,
                           agree, windows, wrate, silent);
  }
  return o;
}

Outcome fold_hygiene(const Cohort& cohort) {
  Outcome o;
  auto check_stratified = [&](const std::vector<Context>& y, std::uint64_t seed, const std::string& what) {
    const auto plan = make_stratified_folds(y, 5, seed);
    plan.validate();
    std::array<double, 2> totals{};
    for (auto c : y) totals[static_cast<std::size_t>(class_index(c))] += 1;
    for (const auto& f : plan.folds) {
      std::array<double, 2> got{};
      for (auto i : f.test) got[static_cast<std::size_t>(class_index(y[i]))] += 1;
      for (std::size_t c = 0; c < 2; ++c) {
        o.require(std::abs(got[c] - totals[c] / 5.0) <= 1.0, what + ": fold proportion off by more than one");
      }
    }
  };
  auto check_loso = [&](const std::vector<std::string>& subjects, const std::vector<Context>& y, const std::string& what) {
    const auto plan = make_loso_folds(subjects, y);
    plan.validate();
    for (const auto& f : plan.folds) {
      std::set<std::string> train;
      for (auto i : f.train) train.insert(subjects[i]);
      for (auto i : f.test) o.require(!train.contains(subjects[i]), what + ": subject on both sides");
    }
    return plan;
  };

  std::vector<Context> y;
  std::vector<std::string> subjects;
  table_shaped(y, subjects);
  for (std::uint64_t seed = 0; seed < 20; ++seed) check_stratified(y, seed, "table-shaped");
  const auto plan = check_loso(subjects, y, "table-shaped");
  o.require(plan.folds.size() == 9, fmt::format("{} LOSO folds", plan.folds.size()));
  bool s3 = false;
  for (const auto& f : plan.folds) s3 |= f.key == "S03" && f.degenerate;
  o.require(s3, "subject 3 fold not flagged degenerate");

  // The synthetic bout dataset.
  std::vector<SubjectArtifacts> arts;
  for (std::size_t s = 0; s < cohort.scenarios.size(); ++s) {
    arts.push_back(process_subject(cohort.scenarios[s].imu, cohort.labels[s]));
  }
  const auto bouts = build_bout_series_dataset(arts, ChannelKind::magnitude, "z", LengthHandling::pad, 60);
  check_stratified(bouts.y, 1, "synthetic");
  check_loso(bouts.subjects, bouts.y, "synthetic");
  if (o.pass) o.detail = "9 LOSO folds, S03 degenerate; stratified proportions within ±1";
  return o;
}

Outcome numerical_invariants() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  auto random_vec = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
  };

  for (int rep = 0; rep < 100; ++rep) {
    const auto v = random_vec(2 + rng() % 1000);
    const auto z = zscore(UnivariateSeries(v));
    long double mean = 0, var = 0;
    for (double x : z.values()) mean += x;
    mean /= z.size();
    for (double x : z.values()) var += (x - mean) * (x - mean);
    var /= z.size();
    o.require(std::abs(static_cast<double>(mean)) < 1e-12, "z-score mean");
    o.require(std::abs(static_cast<double>(var) - 1.0) < 1e-9, "z-score variance");

    const auto target = v.size() + rng() % 100;
    const auto p = pad_to_length(UnivariateSeries(v), target);
    long double s0 = 0, s1 = 0;
    for (double x : v) s0 += x;
    for (double x : p.values()) s1 += x;
    o.require(p.size() == target && std::abs(static_cast<double>(s0 - s1)) < 1e-9, "padding sum");

    const UnivariateSeries s(v);
    o.require(resample_to_length(s, v.size()).vector() == v, "resample identity");
    const auto r = resample_to_length(s, 2 + rng() % 2000);
    o.require(r[0] == v.front() && r[r.size() - 1] == v.back(), "resample endpoints");

    SymbolicConfig cfg;
    cfg.window_lengths = {16, 32};
    const double a = 0.1 + std::abs(u(rng)), b = u(rng);
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
    o.require(sax_words(v, cfg) == sax_words(w, cfg), "SAX affine invariance");
  }

  // Ridge LOO alpha against n refits.
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 40);
    Eigen::MatrixXd X(20, d);
    std::vector<Context> y;
    for (Eigen::Index i = 0; i < 20; ++i) {
      y.push_back(i % 3 ? Context::indoor : Context::outdoor);
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = g(rng) + (j == 0 && i % 3 ? 1.0 : 0.0);
    }
    const auto alphas = default_ridge_alphas();
    const auto m = fit_ridge_classifier(X, y, alphas);
    std::vector<double> ref;
    for (double al : alphas) ref.push_back(oracle::ridge_loo_refit(X, y, al));
    o.require(m.alpha() == alphas[oracle::argmin(ref)], fmt::format("ridge alpha differs from refits at d={}", d));
  }

  // GNB posteriors against the density product.
  for (int rep = 0; rep < 10; ++rep) {
    TabularDataset t;
    t.X.resize(60, 5);
    for (Eigen::Index i = 0; i < 60; ++i) {
      t.y.push_back(i % 4 ? Context::indoor : Context::outdoor);
      t.subjects.push_back("S");
      for (Eigen::Index j = 0; j < 5; ++j) t.X(i, j) = g(rng) * (1 + j) + (i % 4 ? 0.7 : 0.0);
    }
    t.feature_names = {"a", "b", "c", "d", "e"};
    const auto m = fit_gnb(t);
    for (int q = 0; q < 20; ++q) {
      Eigen::RowVectorXd x(5);
      for (Eigen::Index j = 0; j < 5; ++j) x(j) = g(rng) * 2.0;
      const auto lp = m.log_posterior(x);
      const auto ref = oracle::gnb_posterior(t.X, t.y, x, m.epsilon());
      o.require(std::abs(std::exp(lp[0]) - ref[0]) < 1e-9 && std::abs(std::exp(lp[1]) - ref[1]) < 1e-9,
                "GNB posterior off the density-product oracle");
    }
  }
  if (o.pass) o.detail = "z-score, padding, resample, SAX, ridge LOO, GNB";
  return o;
}

}  // namespace

int main() {
  run(1, "majority floor on a 241/70 dataset", 1.0, majority_floor);
  run(2, "1NN-DTW and DTW oracle equivalence", 30.0, dtw_oracle);
  run(3, "ROCKET/MiniROCKET transform contracts on 200 x 6000", 120.0, kernel_contracts);
  run(7, "numerical invariant suite", 0.0, numerical_invariants);

  const Cohort c1 = make_cohort(1);
  const Cohort c2 = make_cohort(2);
  run(6, "fold hygiene", 0.0, [&] { return fold_hygiene(c1); });
  {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = labeling_fidelity({&c1, &c2});
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    report(5, "labeling fidelity on synthetic scenarios", o, seconds_since(t0) + c1.seconds + c2.seconds, 0.0);
  }
  {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = end_to_end_gap(c1);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    // Scenario generation and labeling count toward the budget.
    report(4, "ROCKET vs GNB gap on the synthetic cohort", o, seconds_since(t0) + c1.seconds, 300.0);
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
