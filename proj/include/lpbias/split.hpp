#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lpbias/graph.hpp"

namespace lpbias {

enum class SplitMode { Static, Temporal };

const char* to_string(SplitMode mode);
SplitMode parse_split_mode(const std::string& text);

struct SplitStats {
  std::size_t source_nodes = 0;
  std::size_t source_edges = 0;
  std::size_t held_out_edges = 0;   ///< removed (static) or after the cut (temporal)
  std::size_t remainder_nodes = 0;  ///< nodes of the learning set before the component filter
  std::size_t remainder_edges = 0;
  std::size_t discarded_prediction_edges = 0;  ///< an endpoint fell outside the learning component
  std::size_t duplicate_prediction_edges = 0;  ///< temporal only: repeats of a learning edge
  double cut_time = 0.0;                       ///< temporal only
  std::vector<std::string> warnings;
};

/// Learning graph plus the held-out future edges, in learning-graph ids.
struct Split {
  Graph learning;
  std::vector<NodePair> prediction;  ///< canonical pairs, ascending
  double target_fraction = 0.2;      ///< removal fraction (static) or learning fraction (temporal)
  SplitMode mode = SplitMode::Static;
  std::uint64_t seed = 0;
  std::string source;  ///< dataset path or name, informational
  SplitStats stats;
};

/// Removes floor(removal_fraction * |E|) uniformly chosen edges, keeps the
/// largest component of what remains, and keeps removed edges whose endpoints
/// both survive as the prediction set.
Split split_static(const Graph& graph, double removal_fraction = 0.2, std::uint64_t seed = 0);

/// Cuts a time-sorted edge list at the timestamp of the edge of rank
/// ceil(learning_fraction * |E|). Edges at or before that time form the
/// learning set.
Split split_temporal(const EdgeList& edges, double learning_fraction = 0.8);

/// Throws DataError if any split invariant is broken.
void validate_split(const Split& split);

/// Writes nodes.txt, learning.edges, prediction.edges and split.json.
void save_split(const Split& split, const std::filesystem::path& dir);
Split load_split(const std::filesystem::path& dir);

}  // namespace lpbias
