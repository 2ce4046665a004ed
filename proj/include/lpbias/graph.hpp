#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lpbias {

/// Dense node index assigned at graph build time.
using NodeId = std::uint32_t;
using NodePair = std::pair<NodeId, NodeId>;

/// Canonical 64-bit key of an unordered pair: (min << 32) | max.
inline std::uint64_t pair_key(NodeId u, NodeId v) noexcept {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline NodePair canonical(NodeId u, NodeId v) noexcept {
  return u < v ? NodePair{u, v} : NodePair{v, u};
}

struct RawEdge {
  std::string u;
  std::string v;
  double time = 0.0;
};

struct IngestStats {
  std::size_t lines_read = 0;
  std::size_t comment_lines = 0;
  std::size_t edges_read = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Edge list as read from text. When `temporal` is set the edges are sorted by
/// time (stable with respect to input order).
struct EdgeList {
  std::vector<RawEdge> edges;
  IngestStats stats;
  bool temporal = false;
};

struct ParseOptions {
  bool weighted = false;  ///< a weight column follows the two endpoints; it is ignored
  bool temporal = false;  ///< last column is a timestamp
};

/// Parses `u v [w] [t]` lines. Lines starting with '#' or '%' are comments.
/// Self-loops are dropped; duplicate undirected edges keep their first
/// occurrence (after the timestamp sort for temporal input).
EdgeList parse_edge_list(std::istream& in, ParseOptions options = {});
EdgeList read_edge_list_file(const std::string& path, ParseOptions options = {});

/// Immutable undirected simple graph in CSR form with sorted neighbor lists.
class Graph {
 public:
  Graph() = default;

  /// Builds from id pairs over `labels.size()` nodes. Duplicate pairs are
  /// collapsed; self-loops are rejected.
  static Graph from_edges(std::vector<std::string> labels, std::span<const NodePair> edges);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  bool has_edge(NodeId u, NodeId v) const;

  const std::string& label(NodeId u) const { return labels_[u]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  /// All edges as canonical (u < v) pairs in ascending order.
  std::vector<NodePair> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Assigns ids in first-appearance order.
Graph build_graph(const EdgeList& list);

/// Component index per node; components are numbered in order of their
/// smallest node id.
std::vector<std::size_t> connected_components(const Graph& graph);
bool is_connected(const Graph& graph);

struct Subgraph {
  Graph graph;
  std::vector<NodeId> original_ids;  ///< new id -> id in the source graph
};

/// Largest component as an induced subgraph. Relative id order is kept.
/// Ties go to the component that holds the smallest node id.
Subgraph extract_largest_component(const Graph& graph);
Graph largest_connected_component(const Graph& graph);

enum class DistanceClass { AtDistanceTwo, AtDistanceThreeOrMore };

/// Distance class of a non-adjacent pair: two iff the endpoints share a
/// neighbor. Disconnected pairs count as three-or-more.
DistanceClass distance_class(const Graph& graph, NodeId u, NodeId v);

}  // namespace lpbias
