#include "ioctx/evaluation.hpp"

#include "ioctx/error.hpp"
#include "ioctx/signal.hpp"
#include "ioctx/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>

#include <fmt/format.h>

namespace ioctx {

std::string_view to_string(FoldStrategy s) {
  switch (s) {
    case FoldStrategy::stratified_k: return "stratified_k";
    case FoldStrategy::loso: return "loso";
    case FoldStrategy::custom: return "custom";
  }
  return "?";
}

void FoldPlan::validate() const {
  std::vector<int> seen(n, 0);
  for (const auto& f : folds) {
    if (f.test.empty()) throw InvalidInput(fmt::format("fold {} has an empty test side", f.key));
    for (auto i : f.test) {
      if (i >= n) throw InvalidInput(fmt::format("fold {}: index {} out of range", f.key, i));
      ++seen[i];
    }
    if (f.train.size() + f.test.size() != n) throw InvalidInput(fmt::format("fold {}: train is not the test complement", f.key));
    std::vector<char> in_test(n, 0);
    for (auto i : f.test) in_test[i] = 1;
    for (auto i : f.train) {
      if (i >= n || in_test[i]) throw InvalidInput(fmt::format("fold {}: train and test overlap", f.key));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] != 1) throw InvalidInput(fmt::format("sample {} is tested {} times", i, seen[i]));
  }
}

namespace {

bool single_class(std::span<const std::size_t> idx, std::span<const Context> labels) {
  if (labels.empty() || idx.empty()) return false;
  return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return labels[i] == labels[idx.front()]; });
}

void fill_train_sides(FoldPlan& plan, std::span<const Context> labels) {
  for (auto& f : plan.folds) {
    std::sort(f.test.begin(), f.test.end());
    std::vector<char> in_test(plan.n, 0);
    for (auto i : f.test) in_test[i] = 1;
    f.train.clear();
    for (std::size_t i = 0; i < plan.n; ++i) {
      if (!in_test[i]) f.train.push_back(i);
    }
    f.degenerate = single_class(f.test, labels);
  }
}

}  // namespace

FoldPlan make_stratified_folds(std::span<const Context> labels, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("stratified folds: k must be at least 2");
  FoldPlan plan;
  plan.strategy = FoldStrategy::stratified_k;
  plan.seed = seed;
  plan.n = labels.size();
  plan.folds.resize(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) plan.folds[static_cast<std::size_t>(f)].key = std::to_string(f);

  std::mt19937_64 rng(seed);
  std::size_t counter = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (class_index(labels[i]) == c) members.push_back(i);
    }
    if (members.empty()) continue;
    if (members.size() < static_cast<std::size_t>(k)) {
      throw InvalidInput(fmt::format("stratified folds: class {} has {} members, fewer than k = {}",
                                     to_string(context_from_index(c)), members.size(), k));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) plan.folds[counter++ % static_cast<std::size_t>(k)].test.push_back(i);
  }
  fill_train_sides(plan, labels);
  return plan;
}

FoldPlan make_loso_folds(std::span<const std::string> subjects, std::span<const Context> labels) {
  if (!labels.empty() && labels.size() != subjects.size()) throw InvalidInput("loso: subjects and labels differ in count");
  FoldPlan plan;
  plan.strategy = FoldStrategy::loso;
  plan.n = subjects.size();
  std::map<std::string, std::size_t> fold_of;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    auto [it, inserted] = fold_of.try_emplace(subjects[i], plan.folds.size());
    if (inserted) plan.folds.push_back({{}, {}, subjects[i], false});
    plan.folds[it->second].test.push_back(i);
  }
  if (plan.folds.size() < 2) throw InvalidInput("loso: at least two distinct subjects are required");
  fill_train_sides(plan, labels);
  return plan;
}

FoldPlan make_custom_folds(std::size_t n, const std::vector<std::vector<std::size_t>>& test_sets,
                           std::span<const Context> labels) {
  if (!labels.empty() && labels.size() != n) throw InvalidInput("custom folds: labels do not match n");
  FoldPlan plan;
  plan.strategy = FoldStrategy::custom;
  plan.n = n;
  for (std::size_t f = 0; f < test_sets.size(); ++f) plan.folds.push_back({{}, test_sets[f], std::to_string(f), false});
  fill_train_sides(plan, labels);
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------------------

Metrics compute_metrics(std::span<const Context> y_true, std::span<const Context> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidInput(fmt::format("metrics: {} true labels vs {} predictions", y_true.size(), y_pred.size()));
  }
  if (y_true.empty()) throw InvalidInput("metrics: no samples");
  Metrics m;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++m.confusion[static_cast<std::size_t>(class_index(y_true[i]))][static_cast<std::size_t>(class_index(y_pred[i]))];
  }
  std::size_t correct = 0;
  int present = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto name = to_string(context_from_index(static_cast<int>(c)));
    correct += m.confusion[c][c];
    m.support[c] = m.confusion[c][0] + m.confusion[c][1];
    const std::size_t predicted = m.confusion[0][c] + m.confusion[1][c];
    if (predicted == 0) {
      m.flags.push_back(fmt::format("precision_undefined:{}", name));
    } else {
      m.class_precision[c] = static_cast<double>(m.confusion[c][c]) / static_cast<double>(predicted);
    }
    if (m.support[c] == 0) {
      m.flags.push_back(fmt::format("excluded:{}", name));
      continue;
    }
    m.class_recall[c] = static_cast<double>(m.confusion[c][c]) / static_cast<double>(m.support[c]);
    const double p = m.class_precision[c];
    const double r = m.class_recall[c];
    m.class_f1[c] = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    m.precision += m.class_precision[c];
    m.recall += m.class_recall[c];
    m.f1 += m.class_f1[c];
    ++present;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());
  m.precision /= present;
  m.recall /= present;
  m.f1 /= present;
  return m;
}

MetricStats mean_std(std::span<const double> values) {
  MetricStats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / n);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 9> kModelNames{{
    {ModelKind::logistic, "logistic"},
    {ModelKind::ridge, "ridge"},
    {ModelKind::knn, "knn"},
    {ModelKind::gnb, "gnb"},
    {ModelKind::rocket, "rocket"},
    {ModelKind::minirocket, "minirocket"},
    {ModelKind::dtw, "dtw"},
    {ModelKind::weasel, "weasel"},
    {ModelKind::mrseql, "mrseql"},
}};

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& [k, name] : kModelNames) {
    if (k == kind) return name;
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto& [k, n] : kModelNames) {
    if (n == name) return k;
  }
  throw InvalidInput(fmt::format("model: unknown model '{}'", name));
}

bool is_tabular(ModelKind kind) {
  return kind == ModelKind::logistic || kind == ModelKind::ridge || kind == ModelKind::knn || kind == ModelKind::gnb;
}

bool accepts_variable_length(ModelKind kind) {
  return kind == ModelKind::dtw || kind == ModelKind::weasel || kind == ModelKind::mrseql;
}

std::string_view to_string(Normalization n) { return n == Normalization::zscore ? "zscore" : "none"; }

Normalization parse_normalization(std::string_view name) {
  if (name == "zscore") return Normalization::zscore;
  if (name == "none") return Normalization::none;
  throw InvalidInput(fmt::format("normalization: expected zscore or none, got '{}'", name));
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j = {{"kind", to_string(kind)}, {"seed", seed}};
  switch (kind) {
    case ModelKind::logistic:
      j["l2_strength"] = logistic.l2_strength;
      j["balanced"] = logistic.balanced;
      break;
    case ModelKind::ridge: j["alphas"] = ridge_alphas; break;
    case ModelKind::knn: j["k"] = knn_k; break;
    case ModelKind::gnb: break;
    case ModelKind::rocket:
      j["num_kernels"] = rocket_kernels;
      j["alphas"] = ridge_alphas;
      break;
    case ModelKind::minirocket:
      j["num_features"] = minirocket.num_features;
      j["max_dilations_per_kernel"] = minirocket.max_dilations_per_kernel;
      j["alphas"] = ridge_alphas;
      break;
    case ModelKind::dtw: break;
    case ModelKind::weasel:
    case ModelKind::mrseql: j["top_k"] = symbolic_top_k; break;
  }
  return j;
}

std::unique_ptr<TabularModel> fit_tabular_model(const ModelSpec& spec, const TabularDataset& train) {
  switch (spec.kind) {
    case ModelKind::logistic: return std::make_unique<LogisticModel>(fit_logistic(train, spec.logistic));
    case ModelKind::ridge: return std::make_unique<RidgeModel>(fit_ridge_classifier(train, spec.ridge_alphas));
    case ModelKind::knn: return std::make_unique<KnnModel>(fit_knn(train, spec.knn_k));
    case ModelKind::gnb: return std::make_unique<GaussianNbModel>(fit_gnb(train));
    default: break;
  }
  throw InvalidInput(fmt::format("model '{}' is not a tabular classifier", to_string(spec.kind)));
}

std::unique_ptr<SeriesClassifier> make_series_classifier(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::rocket:
      return std::make_unique<RocketClassifier>(spec.rocket_kernels, spec.seed, spec.ridge_alphas, spec.jobs);
    case ModelKind::minirocket: {
      auto cfg = spec.minirocket;
      cfg.seed = spec.seed;
      return std::make_unique<MiniRocketClassifier>(cfg, spec.ridge_alphas, spec.jobs);
    }
    case ModelKind::dtw: return std::make_unique<Dtw1nnClassifier>(spec.jobs);
    case ModelKind::weasel: {
      auto cfg = weasel_like_config();
      cfg.top_k = spec.symbolic_top_k;
      cfg.logistic = spec.logistic;
      return std::make_unique<SymbolicLinearClassifier>(cfg, "weasel");
    }
    case ModelKind::mrseql: {
      auto cfg = mrseql_like_config();
      cfg.top_k = spec.symbolic_top_k;
      cfg.logistic = spec.logistic;
      return std::make_unique<SymbolicLinearClassifier>(cfg, "mrseql");
    }
    default: break;
  }
  throw InvalidInput(fmt::format("model '{}' is not a series classifier", to_string(spec.kind)));
}

// ---------------------------------------------------------------------------

void MetricsReport::aggregate() {
  std::array<std::vector<double>, 4> v;
  for (const auto& f : folds) {
    v[0].push_back(f.metrics.accuracy);
    v[1].push_back(f.metrics.precision);
    v[2].push_back(f.metrics.recall);
    v[3].push_back(f.metrics.f1);
  }
  accuracy = mean_std(v[0]);
  precision = mean_std(v[1]);
  recall = mean_std(v[2]);
  f1 = mean_std(v[3]);
}

namespace {

nlohmann::json stats_json(const MetricStats& s) { return {{"mean", s.mean}, {"std", s.std}}; }
MetricStats stats_from(const nlohmann::json& j) { return {j.at("mean").get<double>(), j.at("std").get<double>()}; }

}  // namespace

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json fold_list = nlohmann::json::array();
  for (const auto& f : folds) {
    const auto& m = f.metrics;
    fold_list.push_back({{"fold", f.fold},
                         {"key", f.key},
                         {"degenerate", f.degenerate},
                         {"train_size", f.train_size},
                         {"test_size", f.test_size},
                         {"fit_checksum", fmt::format("{:016x}", f.fit_checksum)},
                         {"accuracy", m.accuracy},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"confusion", m.confusion},
                         {"flags", m.flags}});
  }
  return {{"schema", kReportSchema},
          {"campaign_id", campaign_id},
          {"config", config},
          {"folds", fold_list},
          {"aggregate",
           {{"accuracy", stats_json(accuracy)},
            {"precision", stats_json(precision)},
            {"recall", stats_json(recall)},
            {"f1", stats_json(f1)}}}};
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != kReportSchema) {
    throw InvalidInput(fmt::format("report: expected schema {}, got '{}'", kReportSchema, j.value("schema", "")));
  }
  MetricsReport r;
  r.campaign_id = j.at("campaign_id").get<std::string>();
  r.config = j.at("config");
  for (const auto& f : j.at("folds")) {
    FoldResult fr;
    fr.fold = f.at("fold").get<std::size_t>();
    fr.key = f.at("key").get<std::string>();
    fr.degenerate = f.at("degenerate").get<bool>();
    fr.train_size = f.at("train_size").get<std::size_t>();
    fr.test_size = f.at("test_size").get<std::size_t>();
    fr.fit_checksum = std::stoull(f.at("fit_checksum").get<std::string>(), nullptr, 16);
    fr.metrics.accuracy = f.at("accuracy").get<double>();
    fr.metrics.precision = f.at("precision").get<double>();
    fr.metrics.recall = f.at("recall").get<double>();
    fr.metrics.f1 = f.at("f1").get<double>();
    fr.metrics.confusion = f.at("confusion").get<ConfusionMatrix>();
    fr.metrics.flags = f.at("flags").get<std::vector<std::string>>();
    r.folds.push_back(std::move(fr));
  }
  const auto& a = j.at("aggregate");
  r.accuracy = stats_from(a.at("accuracy"));
  r.precision = stats_from(a.at("precision"));
  r.recall = stats_from(a.at("recall"));
  r.f1 = stats_from(a.at("f1"));
  return r;
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t state) {
  for (auto b : bytes) {
    state ^= b;
    state *= 0x100000001b3ULL;
  }
  return state;
}

namespace {

template <typename T>
std::uint64_t hash_values(std::span<const T> values, std::uint64_t state) {
  return fnv1a({reinterpret_cast<const unsigned char*>(values.data()), values.size_bytes()}, state);
}

std::uint64_t hash_labels(std::span<const Context> y, std::uint64_t state) {
  std::vector<unsigned char> bytes(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) bytes[i] = static_cast<unsigned char>(class_index(y[i]));
  return fnv1a(bytes, state);
}

}  // namespace

std::uint64_t fit_checksum(const Eigen::MatrixXd& X, std::span<const Context> y) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      const double v = X(r, c);
      h = hash_values(std::span<const double>(&v, 1), h);
    }
  }
  return hash_labels(y, h);
}

std::uint64_t fit_checksum(const SeriesDataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& s : data.series) {
    const std::uint64_t len = s.size();
    h = hash_values(std::span<const std::uint64_t>(&len, 1), h);
    h = hash_values(s.values(), h);
  }
  return hash_labels(data.y, h);
}

namespace {

void check_plan(const FoldPlan& plan, std::size_t n) {
  if (plan.n != n) throw InvalidInput(fmt::format("fold plan covers {} samples, dataset has {}", plan.n, n));
  if (plan.folds.empty()) throw InvalidInput("fold plan has no folds");
}

nlohmann::json campaign_config(const ModelSpec& spec, const FoldPlan& plan, Normalization norm) {
  return {{"model", spec.to_json()},
          {"folds", {{"strategy", to_string(plan.strategy)}, {"count", plan.folds.size()}, {"seed", plan.seed}}},
          {"normalization", to_string(norm)}};
}

// Train-side statistics used to fill missing values in one fold.
struct MissingResolution {
  std::vector<Eigen::Index> kept;
  std::vector<double> fill;
};

MissingResolution resolve_missing(const Eigen::MatrixXd& train) {
  MissingResolution r;
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < train.rows(); ++i) {
      if (!std::isnan(train(i, c))) {
        sum += train(i, c);
        ++count;
      }
    }
    if (count == 0) continue;
    r.kept.push_back(c);
    r.fill.push_back(sum / static_cast<double>(count));
  }
  return r;
}

Eigen::MatrixXd apply_missing(const Eigen::MatrixXd& X, const MissingResolution& r) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(r.kept.size()));
  for (std::size_t k = 0; k < r.kept.size(); ++k) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double v = X(i, r.kept[k]);
      out(i, static_cast<Eigen::Index>(k)) = std::isnan(v) ? r.fill[k] : v;
    }
  }
  return out;
}

}  // namespace

MetricsReport run_campaign(const TabularDataset& data, const ModelSpec& spec, const FoldPlan& plan,
                           Normalization norm, std::string campaign_id, const FitAudit& audit) {
  if (!is_tabular(spec.kind)) {
    throw InvalidInput(fmt::format("model '{}' needs a series dataset, got a tabular one", to_string(spec.kind)));
  }
  data.validate(false);
  for (Eigen::Index i = 0; i < data.X.size(); ++i) {
    if (std::isinf(data.X.data()[i])) throw InvalidInput("tabular dataset contains infinite values");
  }
  check_plan(plan, data.rows());

  MetricsReport report;
  report.campaign_id = std::move(campaign_id);
  report.config = campaign_config(spec, plan, norm);
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& fold = plan.folds[f];
    auto train = data.subset(fold.train);
    auto test = data.subset(fold.test);

    const auto missing = resolve_missing(train.X);
    if (missing.kept.empty()) throw DegenerateTraining(fmt::format("fold {}: every feature is missing on the train side", fold.key));
    train.X = apply_missing(train.X, missing);
    test.X = apply_missing(test.X, missing);
    if (!train.feature_names.empty()) {
      std::vector<std::string> names;
      for (auto c : missing.kept) names.push_back(data.feature_names[static_cast<std::size_t>(c)]);
      train.feature_names = names;
      test.feature_names = std::move(names);
    }
    if (norm == Normalization::zscore) {
      ColumnStandardizer scaler;
      train.X = scaler.fit_transform(train.X);
      test.X = scaler.transform(test.X);
    }

    FoldResult result{f, fold.key, fold.degenerate, train.rows(), test.rows(), fit_checksum(train.X, train.y), {}};
    if (audit) audit(f, fold.train, result.fit_checksum);
    const auto model = fit_tabular_model(spec, train);
    result.metrics = compute_metrics(test.y, model->predict(test.X));
    report.folds.push_back(std::move(result));
  }
  report.aggregate();
  return report;
}

MetricsReport run_campaign(const SeriesDataset& data, const ModelSpec& spec, const FoldPlan& plan,
                           Normalization norm, std::string campaign_id, const FitAudit& audit) {
  if (is_tabular(spec.kind)) {
    throw InvalidInput(fmt::format("model '{}' needs a tabular dataset, got a series one", to_string(spec.kind)));
  }
  data.validate();
  if (!accepts_variable_length(spec.kind)) {
    if (data.length_mode != LengthMode::fixed) {
      throw InvalidInput(fmt::format("model '{}' requires equal-length series; pad or resample first", to_string(spec.kind)));
    }
    data.fixed_length();
  }
  check_plan(plan, data.size());

  SeriesDataset prepared = data;
  if (norm == Normalization::zscore) {
    for (auto& s : prepared.series) s = zscore(s);
  }

  // ROCKET kernels depend only on the seed and the series length, and the
  // transform treats every series on its own, so the feature matrix is shared
  // by all folds; the ridge head is still fitted on each train side alone.
  std::optional<TabularDataset> rocket_features;
  if (spec.kind == ModelKind::rocket) {
    const auto bank = generate_rocket_kernels(prepared.fixed_length(), spec.rocket_kernels, spec.seed);
    rocket_features = rocket_transform(prepared, bank, spec.jobs).features;
  }

  MetricsReport report;
  report.campaign_id = std::move(campaign_id);
  report.config = campaign_config(spec, plan, norm);
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& fold = plan.folds[f];
    const auto train = prepared.subset(fold.train);
    const auto test = prepared.subset(fold.test);
    FoldResult result{f, fold.key, fold.degenerate, train.size(), test.size(), fit_checksum(train), {}};
    if (audit) audit(f, fold.train, result.fit_checksum);
    if (rocket_features) {
      require_both_classes(train.y, "rocket");
      const auto ridge = fit_ridge_classifier(rocket_features->subset(fold.train).X, train.y, spec.ridge_alphas);
      result.metrics = compute_metrics(test.y, ridge.predict(rocket_features->subset(fold.test).X));
    } else {
      auto model = make_series_classifier(spec);
      model->fit(train);
      result.metrics = compute_metrics(test.y, model->predict(test));
    }
    report.folds.push_back(std::move(result));
  }
  report.aggregate();
  return report;
}

}  // namespace ioctx
