#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "lpbias/bias_audit.hpp"
#include "lpbias/error.hpp"
#include "lpbias/evaluation.hpp"
#include "lpbias/heuristics.hpp"
#include "synthetic.hpp"

using namespace lpbias;
using namespace lpbias::testing;

namespace {

ScoredRanking ranking_of(std::size_t n, std::vector<double> scores = {}, std::vector<std::uint8_t> labels = {}) {
  std::vector<NodePair> pairs;
  for (NodeId i = 0; i < n; ++i) pairs.emplace_back(i, i + 100000);
  if (scores.empty())
    for (std::size_t i = 0; i < n; ++i) scores.push_back(static_cast<double>(n - i));
  if (labels.empty()) labels.assign(n, 0), labels[0] = 1;
  return ScoredRanking(pairs, scores, labels);
}

}  // namespace

TEST_CASE("hub thresholds", "[bias][hubs]") {
  SECTION("degrees 5,4,3,2,1,... keep one hub") {
    // node 0 has degree 5, node 1 degree 4, node 2 degree 3, node 3 degree 2
    std::vector<NodePair> e{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 6}, {2, 7}};
    auto g = graph_from_pairs(10, e);
    // degrees: 0:5 1:4 2:3 3:2 4..7:1 8,9:0 -- the tail does not matter for rank 1
    auto h = hub_set(g, 0.1);
    CHECK(h.degree_threshold == 5);
    CHECK(h.member_count == 1);
    CHECK(h.contains(0));
  }
  SECTION("equal degrees make everyone a hub") {
    std::vector<NodePair> ring;
    for (NodeId i = 0; i < 12; ++i) ring.emplace_back(i, (i + 1) % 12);
    auto h = hub_set(graph_from_pairs(12, ring), 0.1);
    CHECK(h.member_count == 12);
  }
  SECTION("star centre is the only hub") {
    std::vector<NodePair> star;
    for (NodeId i = 1; i < 10; ++i) star.emplace_back(0, i);
    auto h = hub_set(graph_from_pairs(10, star), 0.1);
    CHECK(h.member_count == 1);
    CHECK(h.contains(0));
  }
}

TEST_CASE("hub sets honour their invariants", "[bias][hubs][property]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = erdos_renyi(50 + seed, 0.1, seed);
    auto h = hub_set(g, 0.1);
    CHECK(h.member_count >= static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(g.node_count()))));
    for (NodeId u = 0; u < g.node_count(); ++u) CHECK(h.contains(u) == (g.degree(u) >= h.degree_threshold));
  }
}

TEST_CASE("pair properties", "[bias][property]") {
  auto g = two_cliques(5);
  auto p = Partition::from_labels({0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  auto hubs = hub_set(g, 0.1);  // the two bridge ends, degree 5
  CHECK(hubs.member_count == 2);
  AuditContext ctx{&g, &p, &hubs};
  CHECK(pair_property(ctx, 0, 6, BiasProperty::IntraCommunity) == false);
  CHECK(pair_property(ctx, 0, 6, BiasProperty::ShortDistance) == false);
  CHECK(pair_property(ctx, 0, 6, BiasProperty::InvolvesHub) == false);
  CHECK(pair_property(ctx, 4, 6, BiasProperty::ShortDistance) == true);
  CHECK(pair_property(ctx, 4, 6, BiasProperty::InvolvesHub) == true);
  CHECK_THROWS_AS(pair_property(ctx, 0, 1, BiasProperty::IntraCommunity), ContractViolation);

  auto path = graph_from_pairs(3, {{0, 1}, {1, 2}});
  auto pp = Partition::from_labels({0, 0, 0});
  auto ph = hub_set(path, 0.1);
  AuditContext pc{&path, &pp, &ph};
  CHECK(pair_property(pc, 0, 2, BiasProperty::ShortDistance));
  CHECK_FALSE(pair_property(pc, 0, 2, BiasProperty::InvolvesHub));
}

TEST_CASE("short distance agrees with common neighbours", "[bias][property]") {
  auto g = erdos_renyi(60, 0.07, 5);
  auto p = Partition::from_labels(std::vector<std::uint32_t>(60, 0));
  auto hubs = hub_set(g);
  AuditContext ctx{&g, &p, &hubs};
  auto pred = property_predicate(ctx, BiasProperty::ShortDistance);
  for (NodeId u = 0; u < 60; ++u)
    for (NodeId v = u + 1; v < 60; ++v)
      if (!g.has_edge(u, v)) CHECK(pred(u, v) == (common_neighbors(g, u, v) >= 1));
}

TEST_CASE("fraction@k basics", "[bias][curve]") {
  auto r = ranking_of(4);
  const std::size_t ks[] = {1, 2, 3, 4};
  auto always = fraction_at_k(r, [](NodeId, NodeId) { return true; }, ks);
  for (double f : always.fraction) CHECK(f == 1.0);
  CHECK(always.ground_truth_ref == 1.0);
  CHECK(always.dataset_ref == 1.0);
  // ranked pairs start at node 0,1,2,3; property true except at rank 2
  auto pattern = fraction_at_k(r, [](NodeId u, NodeId) { return u != 1; }, ks);
  CHECK(pattern.fraction[3] == 0.75);
  CHECK(pattern.count[3] == 3);
  const std::size_t beyond[] = {5};
  CHECK_THROWS_AS(fraction_at_k(r, [](NodeId, NodeId) { return true; }, beyond), ConfigError);
}

TEST_CASE("fraction@k matches a recount", "[bias][curve][oracle]") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 80;
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    std::vector<char> flag(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 7);
      labels[i] = rng() % 2;
      flag[i] = rng() % 2;
    }
    auto r = ranking_of(n, scores, labels);
    auto pred = [&](NodeId u, NodeId) { return flag[u] != 0; };
    std::vector<std::size_t> ks(n);
    for (std::size_t k = 1; k <= n; ++k) ks[k - 1] = k;
    auto c = fraction_at_k(r, pred, ks);
    std::size_t hits = 0, pos = 0, pos_hits = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto& e = r.entries()[k - 1];
      hits += flag[e.pair.first];
      if (e.label) {
        ++pos;
        pos_hits += flag[e.pair.first];
      }
      REQUIRE(c.count[k - 1] == hits);
      REQUIRE(c.fraction[k - 1] == static_cast<double>(hits) / static_cast<double>(k));
    }
    CHECK(c.dataset_ref == c.fraction.back());
    if (pos) CHECK(c.ground_truth_ref == static_cast<double>(pos_hits) / static_cast<double>(pos));
  }
}

TEST_CASE("perfect prediction reference", "[bias][curve]") {
  EvalSample s;
  std::vector<char> flag;
  std::mt19937_64 rng(2);
  for (NodeId i = 0; i < 400; ++i) {
    s.pairs.emplace_back(i, i + 1000);
    const bool positive = i % 8 == 0;  // 50 positives
    s.labels.push_back(positive);
    // property common among positives, rare among negatives
    flag.push_back(positive ? (rng() % 10 < 8) : (rng() % 10 < 2));
  }
  auto pred = [&](NodeId u, NodeId) { return flag[u] != 0; };
  auto ks = default_k_grid(400);
  auto c = perfect_prediction_reference(s, pred, ks, 3);
  auto at = [&](std::size_t k) { return c.fraction[std::find(ks.begin(), ks.end(), k) - ks.begin()]; };
  CHECK(at(50) == c.ground_truth_ref);
  CHECK(at(400) == c.dataset_ref);
  CHECK(c.ground_truth_ref > c.dataset_ref);
  // past the positives the curve follows (P_hits + (k - n_pos) * r_neg) / k, which
  // falls monotonically towards dataset_ref; the shuffled negatives scatter around it
  const double pos_hits = c.ground_truth_ref * 50.0;
  const double neg_rate = (c.dataset_ref * 400.0 - pos_hits) / 350.0;
  double prev_expected = c.ground_truth_ref;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] <= 50) {
      // a prefix of the positives only
      CHECK(c.count[i] <= static_cast<std::size_t>(std::lround(pos_hits)));
      if (ks[i] == 50) CHECK(c.fraction[i] == c.ground_truth_ref);
      continue;
    }
    const double k = static_cast<double>(ks[i]);
    const double expected = (pos_hits + (k - 50.0) * neg_rate) / k;
    CHECK(expected <= prev_expected);
    CHECK(std::abs(c.fraction[i] - expected) < 0.05);
    prev_expected = expected;
  }
  CHECK(perfect_prediction_reference(s, pred, ks, 3).fraction == c.fraction);
}

TEST_CASE("default k grid", "[bias][grid]") {
  auto ks = default_k_grid(5000);
  CHECK(std::is_sorted(ks.begin(), ks.end()));
  CHECK(std::adjacent_find(ks.begin(), ks.end()) == ks.end());
  for (std::size_t k = 1; k <= 100; ++k) CHECK(ks[k - 1] == k);
  CHECK(ks.back() == 5000);
  const std::size_t extra[] = {1000, 777};
  auto with = default_k_grid(5000, extra);
  CHECK(std::count(with.begin(), with.end(), 1000) == 1);
  CHECK(std::count(with.begin(), with.end(), 777) == 1);
  auto small = default_k_grid(30);
  CHECK(small.size() == 30);
  // between 100 and 1000 about 20 points
  auto decade = std::count_if(ks.begin(), ks.end(), [](std::size_t k) { return k > 100 && k <= 1000; });
  CHECK(decade >= 18);
  CHECK(decade <= 22);
}

TEST_CASE("bias csv header", "[bias][io]") {
  BiasCurve c;
  c.ks = {1, 2};
  c.fraction = {1.0, 0.5};
  c.count = {1, 1};
  c.ground_truth_ref = 0.25;
  c.dataset_ref = 0.125;
  std::ostringstream out;
  write_bias_csv(out, c);
  CHECK(out.str() == "k,fraction,ground_truth_ref,dataset_ref\n1,1,0.25,0.125\n2,0.5,0.25,0.125\n");
}
