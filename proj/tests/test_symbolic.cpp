#include "doctest.h"
#include "helpers.hpp"

#include "ioctx/error.hpp"
#include "ioctx/symbolic.hpp"

#include <cmath>
#include <numbers>

using namespace ioctx;

TEST_CASE("gaussian breakpoints") {
  const auto b4 = gaussian_breakpoints(4);
  REQUIRE(b4.size() == 3);
  CHECK(b4[0] == doctest::Approx(-0.6744897501960817));
  CHECK(b4[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b4[2] == doctest::Approx(0.6744897501960817));
  CHECK(gaussian_breakpoints(2) == std::vector<double>{0.0});
  CHECK_THROWS_AS(gaussian_breakpoints(1), InvalidInput);
  CHECK(symbol_for(-2.0, b4) == 'a');
  CHECK(symbol_for(0.1, b4) == 'c');
  CHECK(symbol_for(5.0, b4) == 'd');
}

TEST_CASE("sax word of a ramp") {
  const std::vector<double> ramp{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(sax_word(ramp, 4, gaussian_breakpoints(2)) == "aabb");
  CHECK(sax_word(ramp, 4, gaussian_breakpoints(4)) == "abcd");
}

TEST_CASE("sax word of a constant window") {
  const std::vector<double> flat(16, 3.0);
  CHECK(sax_word(flat, 4, gaussian_breakpoints(4)) == "bbbb");
  CHECK(sax_word(flat, 4, gaussian_breakpoints(2)) == "aaaa");
}

TEST_CASE("sax words are invariant to positive affine maps") {
  std::mt19937_64 rng(15);
  SymbolicConfig cfg;
  cfg.window_lengths = {8, 16};
  cfg.word_length = 4;
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = testing::random_values(rng, 100);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.5 * x[i] - 12.0;
    CHECK(sax_words(x, cfg) == sax_words(y, cfg));
  }
}

TEST_CASE("sax word agrees with a scalar reference") {
  std::mt19937_64 rng(16);
  const auto bp = gaussian_breakpoints(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto w = testing::random_values(rng, 24);
    double mean = 0, var = 0;
    for (double v : w) mean += v;
    mean /= 24;
    for (double v : w) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / 24);
    std::string ref;
    for (int s = 0; s < 6; ++s) {
      double seg = 0;
      for (int t = 4 * s; t < 4 * s + 4; ++t) seg += (w[static_cast<std::size_t>(t)] - mean) / sd;
      seg /= 4;
      char c = 'a';
      for (double b : bp) c += seg > b;
      ref.push_back(c);
    }
    CHECK(sax_word(w, 6, bp) == ref);
  }
}

TEST_CASE("sax sequence removes consecutive duplicates") {
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.3 * static_cast<double>(i));
  const auto seq = sax_word_sequence(x, 16, 4, 4);
  for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] != seq[i - 1]);
  CHECK(sax_word_sequence(std::vector<double>(5, 1.0), 16, 4, 4).empty());
}

TEST_CASE("sfa coefficients of pure tones") {
  const std::size_t w = 32;
  std::vector<double> cos1(w), sin2(w);
  for (std::size_t t = 0; t < w; ++t) {
    cos1[t] = std::cos(2 * std::numbers::pi * t / w);
    sin2[t] = std::sin(2 * std::numbers::pi * 2 * t / w);
  }
  const auto c = sfa_coefficients(cos1, 4);
  CHECK(c[0] == doctest::Approx(16.0));
  CHECK(std::abs(c[1]) < 1e-9);
  CHECK(std::abs(c[2]) < 1e-9);
  const auto s = sfa_coefficients(sin2, 4);
  CHECK(s[3] == doctest::Approx(-16.0));
  CHECK(std::abs(s[0]) < 1e-9);
  // The DC term is skipped.
  std::vector<double> shifted = cos1;
  for (double& v : shifted) v += 5.0;
  CHECK(sfa_coefficients(shifted, 4)[0] == doctest::Approx(16.0));
  CHECK(sfa_coefficients(cos1, 3).size() == 3);
}

TEST_CASE("information gain breakpoints find the class boundary") {
  std::vector<double> v;
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) {
    v.push_back(i);
    y.push_back(i < 10 ? 0 : 1);
  }
  const auto bp = information_gain_breakpoints(v, y, 2);
  REQUIRE(bp.size() == 1);
  CHECK(bp[0] > 9.0);
  CHECK(bp[0] < 10.0);
  const auto bp4 = information_gain_breakpoints(v, y, 4);
  CHECK(bp4.size() <= 3);
  CHECK(std::is_sorted(bp4.begin(), bp4.end()));
}

namespace {

SeriesDataset motif_dataset(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  std::uniform_int_distribution<int> pos(0, 60);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(100);
    for (double& x : v) x = g(rng);
    const int c = static_cast<int>(i % 2);
    if (c == 1) {
      const int p = pos(rng);
      for (int t = 0; t < 24; ++t) v[static_cast<std::size_t>(p + t)] += 3.0 * std::sin(std::numbers::pi * t / 12.0);
    }
    rows.push_back(v);
    labels.push_back(c);
  }
  return testing::make_dataset(rows, labels);
}

double accuracy(const std::vector<Context>& p, const std::vector<Context>& y) {
  double hit = 0;
  for (std::size_t i = 0; i < p.size(); ++i) hit += p[i] == y[i];
  return hit / static_cast<double>(p.size());
}

}  // namespace

TEST_CASE("symbolic classifiers find a planted motif") {
  const auto train = motif_dataset(60, 1);
  const auto test = motif_dataset(40, 2);
  for (auto cfg : {mrseql_like_config(), weasel_like_config()}) {
    for (auto& c : cfg.configs) c.window_lengths = {16, 32};
    SymbolicLinearClassifier clf(cfg);
    clf.fit(train);
    CHECK(!clf.vocabulary().empty());
    CHECK(clf.vocabulary().size() == clf.scores().size());
    CHECK(std::is_sorted(clf.scores().rbegin(), clf.scores().rend()));
    CHECK(accuracy(clf.predict(test), test.y) >= 0.85);
  }
}

TEST_CASE("sfa bag keys and bigrams") {
  const auto train = motif_dataset(20, 3);
  SymbolicConfig cfg;
  cfg.representation = SymbolicRepresentation::sfa;
  cfg.window_lengths = {16};
  cfg.word_length = 4;
  SfaTransformer sfa;
  CHECK_THROWS_AS(sfa.transform(train.series[0].values()), NotFitted);
  sfa.fit(train, cfg);
  const auto bag = sfa.transform(train.series[0].values());
  int total = 0;
  for (const auto& [k, c] : bag) {
    CHECK(k.rfind("sfa16_", 0) == 0);
    CHECK(k.size() == 10);
    total += c;
  }
  CHECK(total == 100 - 16 + 1);

  cfg.bigrams = true;
  SfaTransformer with_bigrams;
  with_bigrams.fit(train, cfg);
  const auto bag2 = with_bigrams.transform(train.series[0].values());
  int bigrams = 0;
  for (const auto& [k, c] : bag2) {
    if (k.size() > 10) bigrams += c;
  }
  CHECK(bigrams == 100 - 16 + 1 - 16);
}

TEST_CASE("sfa sliding update agrees with exact coefficients") {
  const auto train = motif_dataset(10, 4);
  SymbolicConfig cfg;
  cfg.representation = SymbolicRepresentation::sfa;
  cfg.window_lengths = {20};
  cfg.word_length = 6;
  SfaTransformer sfa;
  sfa.fit(train, cfg);
  const auto& bps = sfa.breakpoints(20);
  const auto x = train.series[5].values();
  WordBag ref;
  for (std::size_t s = 0; s + 20 <= x.size(); ++s) {
    const auto c = sfa_coefficients(x.subspan(s, 20), 6);
    std::string word;
    for (std::size_t v = 0; v < 6; ++v) word.push_back(symbol_for(c[v], bps[v]));
    ++ref["sfa20_" + word];
  }
  CHECK(sfa.transform(x) == ref);
}

TEST_CASE("symbolic classifier degenerate inputs") {
  auto one = mrseql_like_config();
  one.configs[0].window_lengths = {16};
  CHECK_THROWS_AS(SymbolicLinearClassifier{one}, InvalidInput);

  auto cfg = mrseql_like_config();
  cfg.configs[0].window_lengths = {8, 16};
  auto single = motif_dataset(10, 5);
  for (auto& y : single.y) y = Context::indoor;
  SymbolicLinearClassifier a(cfg);
  CHECK_THROWS_AS(a.fit(single), DegenerateTraining);

  // Identical series give every word the same count in every row.
  const std::vector<double> base = motif_dataset(1, 6).series[0].vector();
  const auto flat = testing::make_dataset({base, base, base, base}, {0, 1, 0, 1});
  SymbolicLinearClassifier b(cfg);
  CHECK_THROWS_AS(b.fit(flat), DegenerateTraining);
  CHECK_THROWS_AS(b.predict(flat), NotFitted);

  SymbolicConfig bad;
  bad.word_length = 32;
  bad.window_lengths = {16};
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
