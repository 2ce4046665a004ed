#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "lpbias/error.hpp"
#include "lpbias/evaluation.hpp"
#include "synthetic.hpp"

using namespace lpbias;
using namespace lpbias::testing;

namespace {

ScoredRanking ranking_of(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
  std::vector<NodePair> pairs;
  for (NodeId i = 0; i < scores.size(); ++i) pairs.emplace_back(i, i + 1000);
  return ScoredRanking(pairs, scores, labels);
}

std::vector<std::uint8_t> ranked_labels(const ScoredRanking& r) {
  std::vector<std::uint8_t> out;
  for (const auto& e : r.entries()) out.push_back(e.label);
  return out;
}

// 200 sparse nodes with 400 held-out pairs.
Split synthetic_split(std::uint64_t seed, std::size_t n = 200, double p = 0.03, std::size_t held = 400) {
  auto g = erdos_renyi(n, p, seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::set<NodePair> pred;
  while (pred.size() < held) {
    NodeId u = pick(rng), v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    pred.insert(canonical(u, v));
  }
  return make_split(std::move(g), {pred.begin(), pred.end()});
}

}  // namespace

TEST_CASE("worked AP and AUROC example", "[evaluation][metrics]") {
  auto r = ranking_of({0.9, 0.8, 0.4, 0.3}, {1, 0, 1, 0});
  CHECK(average_precision(r) == Catch::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-15));
  CHECK(auroc(r) == 0.75);
  const std::size_t ks[] = {2, 4};
  auto p = precision_at_k(r, ks);
  CHECK(p[0].second == 0.5);
  CHECK(p[1].second == 0.5);
}

TEST_CASE("degenerate rankings", "[evaluation][metrics]") {
  auto perfect = ranking_of({4, 3, 2, 1}, {1, 1, 0, 0});
  CHECK(average_precision(perfect) == 1.0);
  CHECK(auroc(perfect) == 1.0);
  auto last = ranking_of({5, 4, 3, 2, 1}, {0, 0, 0, 0, 1});
  CHECK(average_precision(last) == Catch::Approx(0.2).epsilon(1e-15));
  auto ties = ranking_of({1, 1, 1, 1}, {1, 0, 0, 1});
  CHECK(auroc(ties) == 0.5);
  CHECK_THROWS_AS(average_precision(ranking_of({1, 2}, {0, 0})), DataError);
  CHECK_THROWS_AS(auroc(ranking_of({1, 2}, {1, 1})), DataError);
  CHECK_THROWS_AS(ranking_of({NAN, 1}, {1, 0}), DataError);
  const std::size_t bad[] = {0};
  CHECK_THROWS_AS(precision_at_k(perfect, bad), ConfigError);
  const std::size_t too_far[] = {5};
  CHECK_THROWS_AS(precision_at_k(perfect, too_far), ConfigError);
}

TEST_CASE("ties are broken by the canonical pair", "[evaluation][ranking]") {
  std::vector<NodePair> pairs{{5, 9}, {1, 7}, {1, 3}, {0, 2}};
  std::vector<double> scores{1.0, 2.0, 1.0, 1.0};
  std::vector<std::uint8_t> labels{1, 0, 0, 1};
  ScoredRanking r(pairs, scores, labels);
  CHECK(r.entries()[0].pair == NodePair{1, 7});
  CHECK(r.entries()[1].pair == NodePair{0, 2});
  CHECK(r.entries()[2].pair == NodePair{1, 3});
  CHECK(r.entries()[3].pair == NodePair{5, 9});
}

TEST_CASE("metrics match brute-force oracles on random samples", "[evaluation][oracle]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 1999;
    // coarse scores for many ties in half the trials
    const int levels = trial % 2 ? 5 : 1000000;
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % levels) / levels;
      labels[i] = (rng() % 4 == 0) ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    auto r = ranking_of(scores, labels);
    CHECK(std::abs(auroc(r) - auroc_pairwise(scores, labels)) <= 1e-12);
    CHECK(std::abs(average_precision(r) - ap_enumerated(ranked_labels(r))) <= 1e-12);
  }
}

TEST_CASE("precision@k matches a recount", "[evaluation][oracle]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 10);
      labels[i] = rng() % 3 == 0;
    }
    auto r = ranking_of(scores, labels);
    auto lab = ranked_labels(r);
    std::vector<std::size_t> ks(n);
    for (std::size_t k = 1; k <= n; ++k) ks[k - 1] = k;
    auto p = precision_at_k(r, ks);
    for (std::size_t k = 1; k <= n; ++k) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < k; ++i) hits += lab[i];
      REQUIRE(p[k - 1].second == static_cast<double>(hits) / static_cast<double>(k));
    }
  }
}

TEST_CASE("AUROC ignores increasing transforms", "[evaluation][property]") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::vector<double> s(300), t(300);
  std::vector<std::uint8_t> y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    s[i] = normal(rng);
    t[i] = std::exp(3.0 * s[i]) + 2.0;
    y[i] = s[i] + normal(rng) > 0;
  }
  CHECK(auroc(ranking_of(s, y)) == auroc(ranking_of(t, y)));
}

TEST_CASE("AP and AUROC are 1 only under full separation", "[evaluation][property]") {
  auto split = ranking_of({3, 2, 1, 1}, {1, 1, 0, 0});
  CHECK(auroc(split) == 1.0);
  CHECK(average_precision(split) == 1.0);
  auto boundary_tie = ranking_of({3, 2, 2, 1}, {1, 0, 1, 0});
  CHECK(auroc(boundary_tie) < 1.0);
}

TEST_CASE("ratio sample arithmetic", "[evaluation][sample]") {
  // 50 nodes, no edges: 1225 candidates, 10 of them prediction edges
  std::vector<NodePair> pred;
  for (NodeId i = 0; i < 10; ++i) pred.emplace_back(i, i + 20);
  auto split = make_split(graph_from_pairs(50, {}), pred);
  CHECK(candidate_population(split.learning) == 1225);
  auto s = build_ratio_sample(split, 100, 10, 1);
  CHECK(s.size() == 100);
  CHECK(s.positives() == 10);  // max(10, round(100 * 10 / 1225) = 1)
  CHECK_THROWS_AS(build_ratio_sample(split, 2000, 10, 1), ConfigError);
  CHECK_THROWS_AS(build_ratio_sample(make_split(graph_from_pairs(50, {}), {}), 100, 10, 1), DataError);
  CHECK_THROWS_AS(build_ratio_sample(split, 100, 11, 1), DataError);
}

TEST_CASE("samples are labelled, distinct and non-adjacent", "[evaluation][sample][property]") {
  auto split = synthetic_split(3);
  std::set<NodePair> pred(split.prediction.begin(), split.prediction.end());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const auto& s : {build_ratio_sample(split, 5000, 10, seed), build_positive_quota_sample(split, 100, seed)}) {
      std::set<NodePair> seen;
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto [u, v] = s.pairs[i];
        REQUIRE(u < v);
        CHECK_FALSE(split.learning.has_edge(u, v));
        CHECK(seen.insert(s.pairs[i]).second);
        CHECK((s.labels[i] == 1) == (pred.count(s.pairs[i]) == 1));
      }
    }
  }
}

TEST_CASE("realized ratio tracks the population ratio", "[evaluation][sample]") {
  auto split = synthetic_split(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = build_ratio_sample(split, 10000, 10, seed);
    CHECK(std::abs(s.realized_positive_ratio - s.population_ratio) / s.population_ratio < 0.01);
  }
}

TEST_CASE("quota sample stops at the quota", "[evaluation][sample]") {
  // 400 positives keep the standard error of the mean size near 1%
  auto split = synthetic_split(5, 300, 0.03, 2000);
  const double population = static_cast<double>(candidate_population(split.learning));
  const double held = static_cast<double>(split.prediction.size());
  double mean_size = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = build_positive_quota_sample(split, 400, seed);
    CHECK(s.positives() == 400);
    CHECK(s.labels.back() == 1);
    mean_size += static_cast<double>(s.size()) / 20.0;
  }
  // draws without replacement until the 400th success
  const double expected = 400.0 * (population + 1.0) / (held + 1.0);
  CHECK(std::abs(mean_size - expected) / expected < 0.05);
  CHECK_THROWS_AS(build_positive_quota_sample(split, 2001, 1), DataError);
}

TEST_CASE("a prediction set covering every candidate gives no negatives", "[evaluation][sample]") {
  auto g = graph_from_pairs(4, {{0, 1}, {2, 3}});
  auto split = make_split(g, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  auto s = build_positive_quota_sample(split, 4, 9);
  CHECK(s.size() == 4);
  CHECK(s.positives() == 4);
}

TEST_CASE("mean and sample standard deviation", "[evaluation][summary]") {
  const double v[] = {1.0, 2.0, 3.0, 4.0};
  auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == Catch::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  const double one[] = {0.7};
  CHECK(summarize(one).stddev == 0.0);
}
