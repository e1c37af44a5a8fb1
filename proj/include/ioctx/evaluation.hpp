#pragma once

#include "ioctx/minirocket.hpp"
#include "ioctx/series_dataset.hpp"
#include "ioctx/series_models.hpp"
#include "ioctx/tabular.hpp"
#include "ioctx/tabular_dataset.hpp"
#include "ioctx/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ioctx {

// ---------------------------------------------------------------------------
// Fold plans

enum class FoldStrategy { stratified_k, loso, custom };

std::string_view to_string(FoldStrategy s);

struct Fold {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::string key;                 // subject id for LOSO, fold number otherwise
  bool degenerate = false;         // test side holds a single class
};

struct FoldPlan {
  FoldStrategy strategy = FoldStrategy::stratified_k;
  std::vector<Fold> folds;
  std::uint64_t seed = 0;
  std::size_t n = 0;

  // Test sides partition [0, n) and each train side is the complement.
  void validate() const;
};

// Each class is shuffled and dealt round-robin; the fold counter carries over
// from one class to the next so fold sizes also differ by at most one.
FoldPlan make_stratified_folds(std::span<const Context> labels, int k, std::uint64_t seed);

// One fold per subject, in first-seen order. Labels are used only to flag
// folds whose test side holds a single class.
FoldPlan make_loso_folds(std::span<const std::string> subjects, std::span<const Context> labels);

// Caller-supplied test sets; train sides are their complements.
FoldPlan make_custom_folds(std::size_t n, const std::vector<std::vector<std::size_t>>& test_sets,
                           std::span<const Context> labels = {});

// ---------------------------------------------------------------------------
// Metrics

// counts[true class][predicted class], indexed by class_index().
using ConfusionMatrix = std::array<std::array<std::size_t, 2>, 2>;

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  // macro
  double recall = 0.0;     // macro
  double f1 = 0.0;         // macro mean of per-class F1
  ConfusionMatrix confusion{};
  std::array<double, 2> class_precision{};
  std::array<double, 2> class_recall{};
  std::array<double, 2> class_f1{};
  std::array<std::size_t, 2> support{};
  // Notes such as "precision_undefined:outdoor" where a zero denominator was
  // replaced by 0, or "excluded:indoor" for a class absent from y_true.
  std::vector<std::string> flags;
};

// Macro averages run over the classes present in y_true; a class with no
// predictions gets precision 0 and a flag.
Metrics compute_metrics(std::span<const Context> y_true, std::span<const Context> y_pred);

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over folds
};

MetricStats mean_std(std::span<const double> values);

// ---------------------------------------------------------------------------
// Campaigns

enum class ModelKind { logistic, ridge, knn, gnb, rocket, minirocket, dtw, weasel, mrseql };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
bool is_tabular(ModelKind kind);
// DTW and the symbolic models accept variable-length series.
bool accepts_variable_length(ModelKind kind);

enum class Normalization { none, zscore };

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view name);

struct ModelSpec {
  ModelKind kind = ModelKind::gnb;
  int knn_k = 5;
  LogisticConfig logistic{};
  std::vector<double> ridge_alphas = default_ridge_alphas();
  std::size_t rocket_kernels = kRocketDefaultKernels;
  MiniRocketConfig minirocket{};
  std::size_t symbolic_top_k = 10000;
  std::uint64_t seed = 0;
  int jobs = 1;

  nlohmann::json to_json() const;
};

std::unique_ptr<TabularModel> fit_tabular_model(const ModelSpec& spec, const TabularDataset& train);
std::unique_ptr<SeriesClassifier> make_series_classifier(const ModelSpec& spec);

struct FoldResult {
  std::size_t fold = 0;
  std::string key;
  bool degenerate = false;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::uint64_t fit_checksum = 0;  // FNV-1a over the exact inputs handed to fit
  Metrics metrics;
};

struct MetricsReport {
  std::string campaign_id;
  nlohmann::json config;
  std::vector<FoldResult> folds;
  MetricStats accuracy;
  MetricStats precision;
  MetricStats recall;
  MetricStats f1;

  // Recomputes the aggregates from the per-fold metrics.
  void aggregate();
  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
};

inline constexpr std::string_view kReportSchema = "ioctx.report/1";

// Called once per fold with the training indices and the checksum of the
// fit inputs, before the model is fitted.
using FitAudit = std::function<void(std::size_t fold, std::span<const std::size_t> train, std::uint64_t checksum)>;

std::uint64_t fnv1a(std::span<const unsigned char> bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::uint64_t fit_checksum(const Eigen::MatrixXd& X, std::span<const Context> y);
std::uint64_t fit_checksum(const SeriesDataset& data);

// Per fold: resolve missing values and fit normalization on the train rows
// only (all-missing train columns are dropped, remaining gaps take the train
// mean), fit, predict the test rows.
MetricsReport run_campaign(const TabularDataset& data, const ModelSpec& spec, const FoldPlan& plan,
                           Normalization norm, std::string campaign_id, const FitAudit& audit = {});

// Series normalization is per series, so it involves no other rows.
MetricsReport run_campaign(const SeriesDataset& data, const ModelSpec& spec, const FoldPlan& plan,
                           Normalization norm, std::string campaign_id, const FitAudit& audit = {});

}  // namespace ioctx
