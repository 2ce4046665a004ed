#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "lpbias/error.hpp"
#include "lpbias/heuristics.hpp"
#include "synthetic.hpp"

using namespace lpbias;
using lpbias::testing::erdos_renyi;
using lpbias::testing::graph_from_pairs;
using lpbias::testing::heuristics_oracle;

TEST_CASE("path a-b-c", "[heuristics]") {
  auto g = graph_from_pairs(3, {{0, 1}, {1, 2}});
  CHECK(common_neighbors(g, 0, 2) == 1);
  CHECK(adamic_adar(g, 0, 2) == Catch::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(adamic_adar(g, 0, 2) == Catch::Approx(1.4427).margin(1e-4));
  CHECK(jaccard(g, 0, 2) == 1.0);
  CHECK(resource_allocation(g, 0, 2) == 0.5);
  CHECK(preferential_attachment(g, 0, 2) == 1);
  auto h = feature_vector(g, 0, 2);
  CHECK(h.cn == 1);
  CHECK(h.pa == 1);
  CHECK(h.deg_lo == 1);
  CHECK(h.deg_hi == 1);
  CHECK(h == feature_vector(g, 2, 0));
}

TEST_CASE("disjoint stars share nothing", "[heuristics]") {
  // centres 0 and 4, leaves 1-3 and 5-7
  auto g = graph_from_pairs(8, {{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}, {4, 7}});
  CHECK(common_neighbors(g, 1, 5) == 0);
  CHECK(adamic_adar(g, 1, 5) == 0.0);
  CHECK(resource_allocation(g, 1, 5) == 0.0);
  CHECK(jaccard(g, 1, 5) == 0.0);
}

TEST_CASE("preferential attachment is the degree product", "[heuristics]") {
  // degree 3 at 0 and degree 4 at 4
  auto g = graph_from_pairs(9, {{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}, {4, 7}, {4, 8}});
  CHECK(preferential_attachment(g, 0, 4) == 12);
  auto isolated = graph_from_pairs(3, {{0, 1}});
  CHECK(preferential_attachment(isolated, 0, 2) == 0);
  CHECK(jaccard(isolated, 2, 1) == 0.0);
}

TEST_CASE("two isolated nodes have jaccard 0", "[heuristics]") {
  auto g = graph_from_pairs(4, {{0, 1}});
  CHECK(jaccard(g, 2, 3) == 0.0);
}

TEST_CASE("K1,4 leaf pairs and centre-leaf pairs", "[heuristics]") {
  auto g = graph_from_pairs(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  for (NodeId a = 1; a <= 4; ++a) {
    CHECK(common_neighbors(g, 0, a) == 0);
    CHECK(preferential_attachment(g, 0, a) == 4);
    CHECK(jaccard(g, 0, a) == 0.0);
    for (NodeId b = a + 1; b <= 4; ++b) {
      CHECK(common_neighbors(g, a, b) == 1);
      CHECK(resource_allocation(g, a, b) == 0.25);
      CHECK(adamic_adar(g, a, b) == Catch::Approx(1.0 / std::log(4.0)).epsilon(1e-15));
      CHECK(jaccard(g, a, b) == 1.0);
    }
  }
}

TEST_CASE("identical endpoints are rejected", "[heuristics]") {
  auto g = graph_from_pairs(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(common_neighbors(g, 1, 1), ContractViolation);
  CHECK_THROWS_AS(feature_vector(g, 2, 2), ContractViolation);
}

TEST_CASE("heuristics equal the set-based oracle on random graphs", "[heuristics][oracle][property]") {
  const double ps[] = {0.05, 0.1, 0.3};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 20 + seed % 45;
    auto g = erdos_renyi(n, ps[seed % 3], seed);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v) {
        if (u == v) continue;
        auto got = feature_vector(g, u, v);
        auto want = heuristics_oracle(g, u, v);
        REQUIRE(got.cn == want.cn);
        REQUIRE(got.pa == want.pa);
        REQUIRE(std::abs(got.aa - want.aa) <= 1e-12);
        REQUIRE(std::abs(got.jaccard - want.jaccard) <= 1e-12);
        REQUIRE(std::abs(got.ra - want.ra) <= 1e-12);
        REQUIRE(got.deg_lo == std::min(g.degree(u), g.degree(v)));
        REQUIRE(got.deg_hi == std::max(g.degree(u), g.degree(v)));
        REQUIRE(got.cn <= got.deg_lo);
        if (g.degree(u) + g.degree(v) > 0) REQUIRE((got.jaccard == 0.0) == (got.cn == 0));
        REQUIRE(got == feature_vector(g, v, u));
      }
  }
}

TEST_CASE("adding a common neighbour never lowers cn, aa, ra or jaccard", "[heuristics][property]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = erdos_renyi(30, 0.15, seed + 50);
    auto edges = g.edges();
    // pick u=0, v=1 and a third node not yet joined to both
    for (NodeId w = 2; w < 30; ++w) {
      if (g.has_edge(0, w) && g.has_edge(1, w)) continue;
      auto grown = edges;
      if (!g.has_edge(0, w)) grown.emplace_back(0, w);
      if (!g.has_edge(1, w)) grown.emplace_back(1, w);
      auto h = graph_from_pairs(30, grown);
      auto before = feature_vector(g, 0, 1);
      auto after = feature_vector(h, 0, 1);
      CHECK(after.cn == before.cn + 1);
      CHECK(after.aa >= before.aa);
      CHECK(after.ra >= before.ra);
      CHECK(after.jaccard >= before.jaccard);
      break;
    }
  }
}

TEST_CASE("feature csv layout", "[heuristics][io]") {
  auto g = graph_from_pairs(3, {{0, 1}, {1, 2}});
  std::ostringstream out;
  const NodePair pairs[] = {{0, 2}};
  write_feature_csv(out, g, pairs);
  CHECK(out.str() == "u,v,cn,aa,pa,jaccard,ra,deg_lo,deg_hi\n0,2,1,1.4426950408889634,1,1,0.5,1,1\n");
}
