#include "lpbias/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_set>

#include "lpbias/error.hpp"

namespace lpbias {
namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool parse_real(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string pair_string_key(const std::string& a, const std::string& b) {
  const auto& lo = a < b ? a : b;
  const auto& hi = a < b ? b : a;
  std::string key;
  key.reserve(lo.size() + hi.size() + 1);
  key.append(lo).push_back('\0');
  key.append(hi);
  return key;
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, ParseOptions options) {
  const std::size_t expected = 2 + (options.weighted ? 1 : 0) + (options.temporal ? 1 : 0);
  EdgeList list;
  list.temporal = options.temporal;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '#' || tokens[0].front() == '%') {
      ++list.stats.comment_lines;
      continue;
    }
    ++data_lines;
    if (tokens.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) + " tokens, found " +
                                    std::to_string(tokens.size()));
    }
    RawEdge edge{std::string(tokens[0]), std::string(tokens[1]), 0.0};
    if (options.weighted) {
      double weight = 0.0;
      if (!parse_real(tokens[2], weight)) throw ParseError(line_no, "invalid weight '" + std::string(tokens[2]) + "'");
    }
    if (options.temporal) {
      if (!parse_real(tokens.back(), edge.time) || !std::isfinite(edge.time)) {
        throw ParseError(line_no, "invalid timestamp '" + std::string(tokens.back()) + "'");
      }
    }
    ++list.stats.edges_read;
    if (edge.u == edge.v) {
      ++list.stats.self_loops_dropped;
      continue;
    }
    list.edges.push_back(std::move(edge));
  }
  list.stats.lines_read = line_no;
  if (data_lines == 0) throw DataError("edge list is empty");

  if (options.temporal) {
    std::stable_sort(list.edges.begin(), list.edges.end(),
                     [](const RawEdge& a, const RawEdge& b) { return a.time < b.time; });
  }
  std::unordered_set<std::string> seen;
  seen.reserve(list.edges.size() * 2);
  std::vector<RawEdge> unique;
  unique.reserve(list.edges.size());
  for (auto& edge : list.edges) {
    if (seen.insert(pair_string_key(edge.u, edge.v)).second) {
      unique.push_back(std::move(edge));
    } else {
      ++list.stats.duplicates_dropped;
    }
  }
  list.edges = std::move(unique);
  if (list.edges.empty()) throw DataError("edge list has no usable edges");
  return list;
}

EdgeList read_edge_list_file(const std::string& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, options);
}

Graph Graph::from_edges(std::vector<std::string> labels, std::span<const NodePair> edges) {
  Graph g;
  const std::size_t n = labels.size();
  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw DataError("edge endpoint out of range");
    if (u == v) throw DataError("self-loop on node '" + labels[u] + "'");
    ++degree[u];
    ++degree[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  // sort and drop duplicate entries, then compact
  std::vector<std::size_t> new_offsets(n + 1, 0);
  std::size_t write = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last);
    auto end = std::unique(first, last);
    for (auto it = first; it != end; ++it) g.adjacency_[write++] = *it;
    new_offsets[i + 1] = write;
  }
  g.adjacency_.resize(write);
  g.adjacency_.shrink_to_fit();
  g.offsets_ = std::move(new_offsets);

  g.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.index_.emplace(labels[i], static_cast<NodeId>(i)).second) {
      throw DataError("duplicate node label '" + labels[i] + "'");
    }
  }
  g.labels_ = std::move(labels);
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph build_graph(const EdgeList& list) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };
  std::vector<NodePair> pairs;
  pairs.reserve(list.edges.size());
  for (const auto& e : list.edges) {
    NodeId u = intern(e.u);
    NodeId v = intern(e.v);
    if (u != v) pairs.emplace_back(u, v);
  }
  return Graph::from_edges(std::move(labels), pairs);
}

std::vector<std::size_t> connected_components(const Graph& graph) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> component(graph.node_count(), unset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < graph.node_count(); ++s) {
    if (component[s] != unset) continue;
    component[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : graph.neighbors(u)) {
        if (component[v] == unset) {
          component[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return component;
}

bool is_connected(const Graph& graph) {
  auto component = connected_components(graph);
  return std::all_of(component.begin(), component.end(), [](std::size_t c) { return c == 0; });
}

Subgraph extract_largest_component(const Graph& graph) {
  if (graph.empty()) throw DataError("largest component of an empty graph");
  auto component = connected_components(graph);
  std::size_t count = *std::max_element(component.begin(), component.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : component) ++sizes[c];
  // components are numbered by smallest member, so the first maximum wins ties
  std::size_t best = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  constexpr auto absent = static_cast<NodeId>(-1);
  std::vector<NodeId> new_id(graph.node_count(), absent);
  Subgraph out;
  std::vector<std::string> labels;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    if (component[u] == best) {
      new_id[u] = static_cast<NodeId>(out.original_ids.size());
      out.original_ids.push_back(u);
      labels.push_back(graph.label(u));
    }
  }
  std::vector<NodePair> pairs;
  for (NodeId u : out.original_ids) {
    for (NodeId v : graph.neighbors(u)) {
      if (u < v) pairs.emplace_back(new_id[u], new_id[v]);
    }
  }
  out.graph = Graph::from_edges(std::move(labels), pairs);
  return out;
}

Graph largest_connected_component(const Graph& graph) {
  return extract_largest_component(graph).graph;
}

DistanceClass distance_class(const Graph& graph, NodeId u, NodeId v) {
  if (u == v) throw ContractViolation("distance_class: identical endpoints");
  if (graph.has_edge(u, v)) throw ContractViolation("distance_class: pair is adjacent");
  auto a = graph.neighbors(u);
  auto b = graph.neighbors(v);
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return DistanceClass::AtDistanceTwo;
    }
  }
  return DistanceClass::AtDistanceThreeOrMore;
}

}  // namespace lpbias
