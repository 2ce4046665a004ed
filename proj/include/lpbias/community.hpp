#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lpbias/graph.hpp"

namespace lpbias {

/// Disjoint community assignment with contiguous ids starting at 0.
struct Partition {
  std::vector<std::uint32_t> assignment;
  std::size_t community_count = 0;

  /// Renumbers arbitrary labels to 0..k-1 in order of first appearance.
  static Partition from_labels(const std::vector<std::uint32_t>& labels);
};

/// Undirected weighted graph with self-loops, used for Louvain aggregation.
/// `loops[i]` is the weight of the self-loop of i, counted once in the total
/// weight and twice in the degree of i.
struct WeightedGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;
  std::vector<double> loops;
  double total_weight = 0.0;

  std::size_t node_count() const noexcept { return loops.size(); }
  double degree(std::uint32_t u) const;

  static WeightedGraph from_graph(const Graph& graph);
};

/// Collapses each community into one node; intra-community weight becomes the
/// self-loop weight.
WeightedGraph aggregate(const WeightedGraph& graph, const Partition& partition);

double modularity(const Graph& graph, const Partition& partition);
double modularity(const WeightedGraph& graph, const Partition& partition);

struct LouvainResult {
  Partition partition;
  std::vector<double> sweep_modularity;       ///< after every local-moving sweep, in order
  std::vector<double> aggregated_modularity;  ///< per level, computed on the aggregated graph
  std::vector<double> projected_modularity;   ///< per level, same partition on the input graph
  std::size_t levels = 0;
};

/// Local moving in seeded random order plus aggregation, until a level makes
/// no move or `max_passes` levels ran. Only strictly improving moves are made;
/// equal gains go to the smaller community id.
LouvainResult louvain(const Graph& graph, std::uint64_t seed = 0, std::size_t max_passes = 100);

void write_partition_csv(std::ostream& out, const Graph& graph, const Partition& partition);

}  // namespace lpbias
