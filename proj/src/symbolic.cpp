#include "ioctx/symbolic.hpp"

#include "ioctx/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

namespace ioctx {

void SymbolicConfig::validate() const {
  if (window_lengths.empty()) throw InvalidInput("symbolic: at least one window length is required");
  if (alphabet_size < 2 || alphabet_size > 26) throw InvalidInput("symbolic: alphabet size must be in [2, 26]");
  if (word_length < 1) throw InvalidInput("symbolic: word length must be positive");
  for (int w : window_lengths) {
    if (w < 1) throw InvalidInput("symbolic: window lengths must be positive");
    if (word_length > w) throw InvalidInput(fmt::format("symbolic: word length {} exceeds window {}", word_length, w));
  }
}

std::vector<double> gaussian_breakpoints(int alphabet_size) {
  if (alphabet_size < 2) throw InvalidInput("symbolic: alphabet size must be at least 2");
  const boost::math::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out;
  for (int i = 1; i < alphabet_size; ++i) {
    out.push_back(boost::math::quantile(normal, static_cast<double>(i) / alphabet_size));
  }
  return out;
}

char symbol_for(double v, std::span<const double> breakpoints) {
  const auto below = std::lower_bound(breakpoints.begin(), breakpoints.end(), v) - breakpoints.begin();
  return static_cast<char>('a' + below);
}

std::string sax_word(std::span<const double> window, int word_length, std::span<const double> breakpoints) {
  const std::size_t w = window.size();
  const auto l = static_cast<std::size_t>(word_length);
  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(w);
  double ss = 0.0;
  for (double v : window) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(w));
  const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
  const bool flat = *lo == *hi;

  std::string word(l, 'a');
  for (std::size_t s = 0; s < l; ++s) {
    const std::size_t begin = s * w / l;
    const std::size_t end = (s + 1) * w / l;
    double seg = 0.0;
    if (!flat) {
      for (std::size_t t = begin; t < end; ++t) seg += (window[t] - mean) / sd;
      seg /= static_cast<double>(end - begin);
    }
    word[s] = symbol_for(seg, breakpoints);
  }
  return word;
}

std::vector<std::string> sax_word_sequence(std::span<const double> x, int window_length, int word_length,
                                           int alphabet_size) {
  const auto bp = gaussian_breakpoints(alphabet_size);
  const auto w = static_cast<std::size_t>(window_length);
  std::vector<std::string> out;
  if (w == 0 || x.size() < w) return out;
  for (std::size_t s = 0; s + w <= x.size(); ++s) {
    auto word = sax_word(x.subspan(s, w), word_length, bp);
    if (out.empty() || out.back() != word) out.push_back(std::move(word));
  }
  return out;
}

WordBag sax_words(std::span<const double> x, const SymbolicConfig& cfg) {
  if (cfg.representation != SymbolicRepresentation::sax) throw InvalidInput("sax_words needs a sax configuration");
  cfg.validate();
  WordBag bag;
  for (int w : cfg.window_lengths) {
    for (const auto& word : sax_word_sequence(x, w, cfg.word_length, cfg.alphabet_size)) {
      ++bag[fmt::format("sax{}_{}", w, word)];
    }
  }
  return bag;
}

// ---------------------------------------------------------------------------
// SFA

std::vector<double> sfa_coefficients(std::span<const double> window, int word_length) {
  const std::size_t w = window.size();
  const auto n_coef = static_cast<std::size_t>((word_length + 1) / 2);
  std::vector<double> out;
  for (std::size_t k = 1; k <= n_coef; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < w; ++t) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k * t) / static_cast<double>(w);
      re += window[t] * std::cos(angle);
      im -= window[t] * std::sin(angle);
    }
    out.push_back(re);
    out.push_back(im);
  }
  out.resize(static_cast<std::size_t>(word_length));
  return out;
}

namespace {

// Fourier values of every sliding window of length w, via the sliding DFT
// update with a periodic exact restart to bound drift. Row-major: one row of
// word_length values per window start.
std::vector<double> sliding_sfa_values(std::span<const double> x, std::size_t w, int word_length) {
  std::vector<double> out;
  if (x.size() < w) return out;
  const std::size_t count = x.size() - w + 1;
  const auto l = static_cast<std::size_t>(word_length);
  const std::size_t n_coef = (l + 1) / 2;
  out.resize(count * l);

  std::vector<std::complex<double>> twiddle(n_coef);
  for (std::size_t k = 0; k < n_coef; ++k) {
    twiddle[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(w));
  }
  std::vector<std::complex<double>> coef(n_coef);
  constexpr std::size_t kRestart = 64;
  for (std::size_t s = 0; s < count; ++s) {
    if (s % kRestart == 0) {
      const auto exact = sfa_coefficients(x.subspan(s, w), static_cast<int>(2 * n_coef));
      for (std::size_t k = 0; k < n_coef; ++k) coef[k] = {exact[2 * k], exact[2 * k + 1]};
    } else {
      const double delta = x[s + w - 1] - x[s - 1];
      for (std::size_t k = 0; k < n_coef; ++k) coef[k] = (coef[k] + delta) * twiddle[k];
    }
    for (std::size_t v = 0; v < l; ++v) {
      const auto& c = coef[v / 2];
      out[s * l + v] = v % 2 == 0 ? c.real() : c.imag();
    }
  }
  return out;
}

double entropy(double pos, double total) {
  if (total <= 0 || pos <= 0 || pos >= total) return 0.0;
  const double p = pos / total;
  return -(p * std::log2(p) + (1 - p) * std::log2(1 - p));
}

struct Split {
  double gain = 0.0;   // weighted by the segment's share of all samples
  std::size_t at = 0;  // first index of the right part
};

// Best information-gain split of sorted[lo, hi); only between distinct values.
Split best_split(const std::vector<std::pair<double, int>>& sorted, std::size_t lo, std::size_t hi, double n_all) {
  Split best;
  const double n = static_cast<double>(hi - lo);
  double pos_total = 0;
  for (std::size_t i = lo; i < hi; ++i) pos_total += sorted[i].second;
  const double parent = entropy(pos_total, n);
  double pos_left = 0;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    pos_left += sorted[i - 1].second;
    if (sorted[i].first == sorted[i - 1].first) continue;
    const double nl = static_cast<double>(i - lo);
    const double nr = n - nl;
    const double gain = parent - (nl / n) * entropy(pos_left, nl) - (nr / n) * entropy(pos_total - pos_left, nr);
    const double weighted = gain * n / n_all;
    if (weighted > best.gain) best = {weighted, i};
  }
  return best;
}

}  // namespace

std::vector<double> information_gain_breakpoints(std::span<const double> values, std::span<const int> labels,
                                                 int alphabet_size) {
  if (values.size() != labels.size()) throw InvalidInput("information gain: values and labels differ in count");
  std::vector<double> cuts;
  if (values.empty()) return cuts;
  std::vector<std::pair<double, int>> sorted(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sorted[i] = {values[i], labels[i]};
  std::sort(sorted.begin(), sorted.end());
  const double n_all = static_cast<double>(sorted.size());
  constexpr double kMinGain = 1e-12;

  std::vector<std::pair<std::size_t, std::size_t>> segments{{0, sorted.size()}};
  if (best_split(sorted, 0, sorted.size(), n_all).gain <= kMinGain) {
    for (int b = 1; b < alphabet_size; ++b) {
      const auto idx = std::min(sorted.size() - 1, sorted.size() * static_cast<std::size_t>(b) / static_cast<std::size_t>(alphabet_size));
      const double cut = sorted[idx].first;
      if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
    }
    return cuts;
  }
  while (static_cast<int>(segments.size()) < alphabet_size) {
    Split best;
    std::size_t best_segment = segments.size();
    for (std::size_t s = 0; s < segments.size(); ++s) {
      const auto split = best_split(sorted, segments[s].first, segments[s].second, n_all);
      if (split.gain > best.gain) {
        best = split;
        best_segment = s;
      }
    }
    if (best_segment == segments.size() || best.gain <= kMinGain) break;
    const auto [lo, hi] = segments[best_segment];
    cuts.push_back(0.5 * (sorted[best.at - 1].first + sorted[best.at].first));
    segments[best_segment] = {lo, best.at};
    segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(best_segment) + 1, {best.at, hi});
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

void SfaTransformer::fit(const SeriesDataset& train, const SymbolicConfig& cfg) {
  if (cfg.representation != SymbolicRepresentation::sfa) throw InvalidInput("SfaTransformer needs an sfa configuration");
  cfg.validate();
  train.validate();
  cfg_ = cfg;
  breakpoints_.clear();
  constexpr std::size_t kMaxFitWindows = 50000;
  const auto l = static_cast<std::size_t>(cfg.word_length);

  for (int wl : cfg.window_lengths) {
    const auto w = static_cast<std::size_t>(wl);
    std::size_t available = 0;
    for (const auto& s : train.series) available += s.size() >= w ? s.size() - w + 1 : 0;
    const std::size_t stride = std::max<std::size_t>(1, (available + kMaxFitWindows - 1) / kMaxFitWindows);

    std::vector<std::vector<double>> values(l);
    std::vector<int> labels;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto coeffs = sliding_sfa_values(train.series[i].values(), w, cfg.word_length);
      const std::size_t count = coeffs.size() / l;
      for (std::size_t s = 0; s < count; s += stride) {
        for (std::size_t v = 0; v < l; ++v) values[v].push_back(coeffs[s * l + v]);
        labels.push_back(class_index(train.y[i]));
      }
    }
    auto& bps = breakpoints_[wl];
    for (std::size_t v = 0; v < l; ++v) bps.push_back(information_gain_breakpoints(values[v], labels, cfg.alphabet_size));
  }
  fitted_ = true;
}

const std::vector<std::vector<double>>& SfaTransformer::breakpoints(int window_length) const {
  const auto it = breakpoints_.find(window_length);
  if (it == breakpoints_.end()) throw InvalidInput(fmt::format("sfa: no breakpoints for window {}", window_length));
  return it->second;
}

WordBag SfaTransformer::transform(std::span<const double> x) const {
  if (!fitted_) throw NotFitted("sfa: transform called before fit");
  WordBag bag;
  const auto l = static_cast<std::size_t>(cfg_.word_length);
  for (int wl : cfg_.window_lengths) {
    const auto w = static_cast<std::size_t>(wl);
    const auto& bps = breakpoints_.at(wl);
    const auto coeffs = sliding_sfa_values(x, w, cfg_.word_length);
    const std::size_t count = coeffs.size() / l;
    std::vector<std::string> words(count, std::string(l, 'a'));
    for (std::size_t s = 0; s < count; ++s) {
      for (std::size_t v = 0; v < l; ++v) words[s][v] = symbol_for(coeffs[s * l + v], bps[v]);
      ++bag[fmt::format("sfa{}_{}", wl, words[s])];
    }
    if (cfg_.bigrams) {
      for (std::size_t s = w; s < count; ++s) ++bag[fmt::format("sfa{}_{}_{}", wl, words[s - w], words[s])];
    }
  }
  return bag;
}

// ---------------------------------------------------------------------------
// Classifier

SymbolicClassifierConfig weasel_like_config() {
  SymbolicConfig sfa;
  sfa.representation = SymbolicRepresentation::sfa;
  sfa.window_lengths = {16, 32, 64, 128};
  sfa.word_length = 4;
  sfa.alphabet_size = 4;
  sfa.bigrams = true;
  return {{sfa}, 10000, {}};
}

SymbolicClassifierConfig mrseql_like_config() {
  SymbolicConfig sax;
  sax.representation = SymbolicRepresentation::sax;
  sax.window_lengths = {16, 32, 64, 128};
  sax.word_length = 8;
  sax.alphabet_size = 4;
  return {{sax}, 10000, {}};
}

SymbolicLinearClassifier::SymbolicLinearClassifier(SymbolicClassifierConfig cfg, std::string name)
    : cfg_(std::move(cfg)), name_(std::move(name)) {
  std::size_t resolutions = 0;
  for (const auto& c : cfg_.configs) {
    c.validate();
    resolutions += c.window_lengths.size();
  }
  if (resolutions < 2) throw InvalidInput("symbolic classifier needs at least two window lengths");
  if (cfg_.top_k == 0) throw InvalidInput("symbolic classifier: top_k must be positive");
}

WordBag SymbolicLinearClassifier::bag(std::span<const double> x) const {
  WordBag out;
  for (std::size_t c = 0; c < cfg_.configs.size(); ++c) {
    const auto part = cfg_.configs[c].representation == SymbolicRepresentation::sax ? sax_words(x, cfg_.configs[c])
                                                                                      : sfa_[c].transform(x);
    for (const auto& [word, count] : part) out[word] += count;
  }
  return out;
}

Eigen::MatrixXd SymbolicLinearClassifier::count_matrix(const SeriesDataset& data) const {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.size()),
                                            static_cast<Eigen::Index>(vocabulary_.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const auto& [word, count] : bag(data.series[i].values())) {
      const auto it = vocab_index_.find(word);
      if (it != vocab_index_.end()) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(it->second)) = count;
    }
  }
  return X;
}

void SymbolicLinearClassifier::fit(const SeriesDataset& train) {
  train.validate();
  if (train.series.empty()) throw InvalidInput("symbolic classifier: empty training set");
  require_both_classes(train.y, name_);

  sfa_.assign(cfg_.configs.size(), SfaTransformer{});
  for (std::size_t c = 0; c < cfg_.configs.size(); ++c) {
    if (cfg_.configs[c].representation == SymbolicRepresentation::sfa) sfa_[c].fit(train, cfg_.configs[c]);
  }

  std::vector<WordBag> bags;
  bags.reserve(train.size());
  std::map<std::string, std::array<double, 2>> class_totals;
  for (std::size_t i = 0; i < train.size(); ++i) {
    bags.push_back(bag(train.series[i].values()));
    for (const auto& [word, count] : bags.back()) {
      class_totals[word][static_cast<std::size_t>(class_index(train.y[i]))] += count;
    }
  }

  const double n = static_cast<double>(train.size());
  std::array<double, 2> class_prob{0, 0};
  for (auto y : train.y) class_prob[static_cast<std::size_t>(class_index(y))] += 1.0 / n;

  struct Candidate {
    std::string word;
    double score;
  };
  std::vector<Candidate> candidates;
  for (const auto& [word, totals] : class_totals) {
    // Words with an identical count in every series carry no information.
    bool constant = true;
    int first = -1;
    for (const auto& b : bags) {
      const auto it = b.find(word);
      const int c = it == b.end() ? 0 : it->second;
      if (first < 0) first = c;
      if (c != first) {
        constant = false;
        break;
      }
    }
    if (constant) continue;
    const double total = totals[0] + totals[1];
    double chi2 = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      const double expected = class_prob[c] * total;
      if (expected > 0) chi2 += (totals[c] - expected) * (totals[c] - expected) / expected;
    }
    candidates.push_back({word, chi2});
  }
  if (candidates.empty()) throw DegenerateTraining(fmt::format("{}: empty vocabulary after filtering", name_));

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
  if (candidates.size() > cfg_.top_k) candidates.resize(cfg_.top_k);

  vocabulary_.clear();
  vocab_index_.clear();
  scores_.clear();
  for (const auto& c : candidates) {
    vocab_index_[c.word] = vocabulary_.size();
    vocabulary_.push_back(c.word);
    scores_.push_back(c.score);
  }

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(train.size()),
                                            static_cast<Eigen::Index>(vocabulary_.size()));
  for (std::size_t i = 0; i < bags.size(); ++i) {
    for (const auto& [word, count] : bags[i]) {
      const auto it = vocab_index_.find(word);
      if (it != vocab_index_.end()) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(it->second)) = count;
    }
  }
  head_ = fit_logistic(scaler_.fit_transform(X), train.y, cfg_.logistic);
}

std::vector<Context> SymbolicLinearClassifier::predict(const SeriesDataset& test) const {
  if (!head_) throw NotFitted(fmt::format("{}: predict called before fit", name_));
  return head_->predict(scaler_.transform(count_matrix(test)));
}

nlohmann::json SymbolicLinearClassifier::summary() const {
  nlohmann::json configs = nlohmann::json::array();
  for (const auto& c : cfg_.configs) {
    configs.push_back({{"representation", c.representation == SymbolicRepresentation::sax ? "sax" : "sfa"},
                       {"window_lengths", c.window_lengths},
                       {"word_length", c.word_length},
                       {"alphabet_size", c.alphabet_size},
                       {"bigrams", c.bigrams}});
  }
  nlohmann::json j = {{"kind", name_}, {"configs", configs}, {"top_k", cfg_.top_k}, {"vocabulary_size", vocabulary_.size()}};
  std::vector<std::string> top(vocabulary_.begin(), vocabulary_.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(10, vocabulary_.size())));
  j["top_words"] = top;
  return j;
}

}  // namespace ioctx
