#pragma once

// Small graph generators and brute-force oracles shared by the test binaries.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lpbias/community.hpp"
#include "lpbias/graph.hpp"
#include "lpbias/split.hpp"

namespace lpbias::testing {

/// Graph over labels "0".."n-1" (id == label) from explicit pairs.
Graph graph_from_pairs(std::size_t n, const std::vector<NodePair>& pairs);

/// G(n, p) with a fixed seed.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Two k-cliques, nodes 0..k-1 and k..2k-1, joined by the edge (k-1, k).
Graph two_cliques(std::size_t k);

/// `blocks` groups of `size` nodes; intra probability p_in, inter p_out.
Graph planted_partition(std::size_t blocks, std::size_t size, double p_in, double p_out, std::uint64_t seed);

/// Split with the given learning graph and prediction pairs, no sampling.
Split make_split(Graph learning, std::vector<NodePair> prediction);

/// Edge list text, one `u v` line per edge.
std::string edge_list_text(const Graph& g);

// oracles ------------------------------------------------------------------

std::set<NodeId> neighbor_set(const Graph& g, NodeId u);

struct OracleHeuristics {
  std::uint64_t cn = 0;
  double aa = 0.0;
  std::uint64_t pa = 0;
  double jaccard = 0.0;
  double ra = 0.0;
};

/// Set-based recomputation from the definitions.
OracleHeuristics heuristics_oracle(const Graph& g, NodeId u, NodeId v);

/// P(s+ > s-) + 0.5 P(s+ == s-) over every positive/negative pair.
double auroc_pairwise(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Mean over positives of precision at their rank, ranks taken in the given
/// (already sorted) label order.
double ap_enumerated(std::span<const std::uint8_t> ranked_labels);

/// Double loop over all node pairs: (1/2m) sum (A_ij - k_i k_j / 2m) [c_i == c_j].
double modularity_naive(const Graph& g, const std::vector<std::uint32_t>& assignment);

}  // namespace lpbias::testing
