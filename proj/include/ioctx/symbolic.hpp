#pragma once

#include "ioctx/series_models.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ioctx {

enum class SymbolicRepresentation { sax, sfa };

struct SymbolicConfig {
  SymbolicRepresentation representation = SymbolicRepresentation::sax;
  std::vector<int> window_lengths{16, 32, 64, 128};
  int word_length = 8;
  int alphabet_size = 4;
  bool bigrams = false;  // SFA only

  // word_length <= every window length, alphabet >= 2, lengths positive.
  void validate() const;
};

// Word -> occurrence count. Keys carry the representation and window length
// (e.g. "sax32_abba", "sfa16_acdb_abbb") so multi-resolution bags are disjoint.
using WordBag = std::map<std::string, int>;

// Equiprobable breakpoints of the standard normal for `alphabet_size` symbols.
std::vector<double> gaussian_breakpoints(int alphabet_size);

// Number of breakpoints strictly below v, as a letter starting at 'a'.
char symbol_for(double v, std::span<const double> breakpoints);

// SAX word of one window: z-normalize, piecewise-aggregate into word_length
// segments, quantize. A zero-variance window quantizes 0 for every segment.
std::string sax_word(std::span<const double> window, int word_length, std::span<const double> breakpoints);

// Sliding-window SAX words with consecutive duplicates removed.
std::vector<std::string> sax_word_sequence(std::span<const double> x, int window_length, int word_length,
                                           int alphabet_size);

// Bag over every window length in cfg (representation must be sax).
WordBag sax_words(std::span<const double> x, const SymbolicConfig& cfg);

// Leading Fourier values of a window, [Re1, Im1, Re2, Im2, ...] truncated to
// word_length. The DC term is skipped.
std::vector<double> sfa_coefficients(std::span<const double> window, int word_length);

// Up to alphabet_size - 1 cut points chosen by greedy information-gain
// splitting; falls back to equi-depth cuts when the best split carries no
// information about the labels.
std::vector<double> information_gain_breakpoints(std::span<const double> values, std::span<const int> labels,
                                                 int alphabet_size);

class SfaTransformer {
 public:
  void fit(const SeriesDataset& train, const SymbolicConfig& cfg);
  WordBag transform(std::span<const double> x) const;
  bool fitted() const { return fitted_; }
  const SymbolicConfig& config() const { return cfg_; }
  // Cut points per coefficient for one window length.
  const std::vector<std::vector<double>>& breakpoints(int window_length) const;

 private:
  SymbolicConfig cfg_;
  std::map<int, std::vector<std::vector<double>>> breakpoints_;
  bool fitted_ = false;
};

struct SymbolicClassifierConfig {
  std::vector<SymbolicConfig> configs;
  std::size_t top_k = 10000;  // words kept by the chi-squared filter
  LogisticConfig logistic{};
};

// SFA with bigrams and information-gain bins.
SymbolicClassifierConfig weasel_like_config();
// SAX at several resolutions.
SymbolicClassifierConfig mrseql_like_config();

// Multi-resolution bag-of-words features, chi-squared filtered, with an L2
// logistic head. Accepts variable-length series.
class SymbolicLinearClassifier final : public SeriesClassifier {
 public:
  explicit SymbolicLinearClassifier(SymbolicClassifierConfig cfg, std::string name = "symbolic");

  std::string_view name() const override { return name_; }
  bool requires_fixed_length() const override { return false; }
  void fit(const SeriesDataset& train) override;
  std::vector<Context> predict(const SeriesDataset& test) const override;
  nlohmann::json summary() const override;

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  // Chi-squared scores aligned with vocabulary().
  const std::vector<double>& scores() const { return scores_; }
  WordBag bag(std::span<const double> x) const;

 private:
  Eigen::MatrixXd count_matrix(const SeriesDataset& data) const;

  SymbolicClassifierConfig cfg_;
  std::string name_;
  std::vector<SfaTransformer> sfa_;  // one per sfa config, in config order
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> vocab_index_;
  std::vector<double> scores_;
  ColumnStandardizer scaler_;
  std::optional<LogisticModel> head_;
};

}  // namespace ioctx
