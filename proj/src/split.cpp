#include "lpbias/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "lpbias/error.hpp"
#include "lpbias/random.hpp"

namespace lpbias {
namespace {

constexpr double kSmallComponentShare = 0.5;

void check_fraction(double f, const char* name) {
  if (!(f > 0.0 && f < 1.0)) {
    throw ConfigError(std::string(name) + " must lie in (0, 1), got " + std::to_string(f));
  }
}

void finish_warnings(Split& split) {
  const double share = split.stats.remainder_nodes == 0
                           ? 0.0
                           : static_cast<double>(split.learning.node_count()) /
                                 static_cast<double>(split.stats.remainder_nodes);
  if (share < kSmallComponentShare) {
    split.stats.warnings.push_back("largest component keeps only " + std::to_string(share * 100.0) +
                                   "% of the learning-set nodes");
  }
  if (split.prediction.empty()) split.stats.warnings.push_back("prediction set is empty");
}

}  // namespace

const char* to_string(SplitMode mode) {
  return mode == SplitMode::Static ? "static" : "temporal";
}

SplitMode parse_split_mode(const std::string& text) {
  if (text == "static") return SplitMode::Static;
  if (text == "temporal") return SplitMode::Temporal;
  throw ConfigError("unknown split mode '" + text + "' (expected static|temporal)");
}

Split split_static(const Graph& graph, double removal_fraction, std::uint64_t seed) {
  check_fraction(removal_fraction, "removal fraction");
  if (graph.empty()) throw DataError("cannot split an empty graph");

  auto edges = graph.edges();
  const auto to_remove =
      static_cast<std::size_t>(std::floor(removal_fraction * static_cast<double>(edges.size()) + 1e-9));
  Rng rng = make_rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);

  std::vector<NodePair> removed(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(to_remove));
  std::vector<NodePair> kept(edges.begin() + static_cast<std::ptrdiff_t>(to_remove), edges.end());

  Split split;
  split.mode = SplitMode::Static;
  split.target_fraction = removal_fraction;
  split.seed = seed;
  split.stats.source_nodes = graph.node_count();
  split.stats.source_edges = edges.size();
  split.stats.held_out_edges = removed.size();
  split.stats.remainder_nodes = graph.node_count();
  split.stats.remainder_edges = kept.size();

  Graph remainder = Graph::from_edges(graph.labels(), kept);
  auto component = extract_largest_component(remainder);

  constexpr auto absent = static_cast<NodeId>(-1);
  std::vector<NodeId> new_id(graph.node_count(), absent);
  for (NodeId i = 0; i < component.original_ids.size(); ++i) new_id[component.original_ids[i]] = i;

  for (auto [u, v] : removed) {
    if (new_id[u] == absent || new_id[v] == absent) {
      ++split.stats.discarded_prediction_edges;
      continue;
    }
    split.prediction.push_back(canonical(new_id[u], new_id[v]));
  }
  std::sort(split.prediction.begin(), split.prediction.end());
  split.learning = std::move(component.graph);
  if (!is_connected(graph)) {
    split.stats.warnings.push_back("input graph is not connected");
  }
  finish_warnings(split);
  return split;
}

Split split_temporal(const EdgeList& list, double learning_fraction) {
  check_fraction(learning_fraction, "learning fraction");
  if (!list.temporal) throw ConfigError("temporal split requires a temporal edge list");
  const auto& edges = list.edges;
  if (edges.empty()) throw DataError("cannot split an empty edge list");
  if (!std::is_sorted(edges.begin(), edges.end(),
                      [](const RawEdge& a, const RawEdge& b) { return a.time < b.time; })) {
    throw DataError("temporal edge list is not sorted by time");
  }

  auto rank = static_cast<std::size_t>(std::ceil(learning_fraction * static_cast<double>(edges.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, edges.size());
  const double cut = edges[rank - 1].time;
  auto first_future = std::upper_bound(edges.begin(), edges.end(), cut,
                                       [](double t, const RawEdge& e) { return t < e.time; });
  if (first_future == edges.end()) {
    throw DataError("no valid temporal cut: every edge is at or before t=" + std::to_string(cut));
  }

  EdgeList learning_list;
  learning_list.edges.assign(edges.begin(), first_future);
  Graph learning_all = build_graph(learning_list);

  Split split;
  split.mode = SplitMode::Temporal;
  split.target_fraction = learning_fraction;
  split.stats.source_edges = edges.size();
  split.stats.held_out_edges = static_cast<std::size_t>(edges.end() - first_future);
  split.stats.remainder_nodes = learning_all.node_count();
  split.stats.remainder_edges = learning_all.edge_count();
  split.stats.cut_time = cut;
  {
    std::unordered_set<std::string> all_labels;
    for (const auto& e : edges) {
      all_labels.insert(e.u);
      all_labels.insert(e.v);
    }
    split.stats.source_nodes = all_labels.size();
  }

  split.learning = largest_connected_component(learning_all);
  std::unordered_set<std::uint64_t> seen;
  for (auto it = first_future; it != edges.end(); ++it) {
    auto u = split.learning.find(it->u);
    auto v = split.learning.find(it->v);
    if (!u || !v) {
      ++split.stats.discarded_prediction_edges;
      continue;
    }
    if (*u == *v) continue;
    if (split.learning.has_edge(*u, *v)) {
      ++split.stats.duplicate_prediction_edges;
      continue;
    }
    if (seen.insert(pair_key(*u, *v)).second) split.prediction.push_back(canonical(*u, *v));
  }
  std::sort(split.prediction.begin(), split.prediction.end());
  finish_warnings(split);
  return split;
}

void validate_split(const Split& split) {
  const auto& g = split.learning;
  if (g.empty()) throw DataError("learning graph is empty");
  if (!is_connected(g)) throw DataError("learning graph is not connected");
  for (auto [u, v] : split.prediction) {
    if (u >= g.node_count() || v >= g.node_count()) throw DataError("prediction edge outside learning graph");
    if (u == v || g.has_edge(u, v)) {
      throw DataError("prediction edge " + g.label(u) + " " + g.label(v) + " is a learning edge");
    }
  }
}

void save_split(const Split& split, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& g = split.learning;
  {
    std::ofstream out(dir / "nodes.txt");
    for (const auto& label : g.labels()) out << label << '\n';
  }
  {
    std::ofstream out(dir / "learning.edges");
    for (auto [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
  }
  {
    std::ofstream out(dir / "prediction.edges");
    for (auto [u, v] : split.prediction) out << g.label(u) << ' ' << g.label(v) << '\n';
  }
  nlohmann::ordered_json j;
  j["mode"] = to_string(split.mode);
  j["target_fraction"] = split.target_fraction;
  j["seed"] = split.seed;
  j["source"] = split.source;
  j["learning_nodes"] = g.node_count();
  j["learning_edges"] = g.edge_count();
  j["prediction_edges"] = split.prediction.size();
  const auto& s = split.stats;
  j["stats"] = {{"source_nodes", s.source_nodes},
                {"source_edges", s.source_edges},
                {"held_out_edges", s.held_out_edges},
                {"remainder_nodes", s.remainder_nodes},
                {"remainder_edges", s.remainder_edges},
                {"discarded_prediction_edges", s.discarded_prediction_edges},
                {"duplicate_prediction_edges", s.duplicate_prediction_edges},
                {"cut_time", s.cut_time}};
  j["warnings"] = s.warnings;
  std::ofstream out(dir / "split.json");
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing split to '" + dir.string() + "'");
}

namespace {

std::vector<NodePair> read_pairs(const std::filesystem::path& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<NodePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a >> b)) throw ParseError(line_no, "expected two labels in " + path.filename().string());
    auto u = g.find(a);
    auto v = g.find(b);
    if (!u || !v) throw ParseError(line_no, "unknown node label in " + path.filename().string());
    pairs.emplace_back(*u, *v);
  }
  return pairs;
}

}  // namespace

Split load_split(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "split.json");
  if (!meta_in) throw DataError("no split.json in '" + dir.string() + "'");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("split.json: ") + e.what());
  }

  std::vector<std::string> labels;
  {
    std::ifstream in(dir / "nodes.txt");
    if (!in) throw DataError("no nodes.txt in '" + dir.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) labels.push_back(line);
    }
  }
  Split split;
  Graph index_only = Graph::from_edges(labels, {});
  auto learning_pairs = read_pairs(dir / "learning.edges", index_only);
  split.learning = Graph::from_edges(std::move(labels), learning_pairs);
  split.prediction = read_pairs(dir / "prediction.edges", split.learning);
  for (auto& p : split.prediction) p = canonical(p.first, p.second);
  std::sort(split.prediction.begin(), split.prediction.end());

  try {
    split.mode = parse_split_mode(meta.at("mode").get<std::string>());
    split.target_fraction = meta.at("target_fraction").get<double>();
    split.seed = meta.at("seed").get<std::uint64_t>();
    split.source = meta.value("source", std::string{});
    const auto& s = meta.at("stats");
    split.stats.source_nodes = s.value("source_nodes", std::size_t{0});
    split.stats.source_edges = s.value("source_edges", std::size_t{0});
    split.stats.held_out_edges = s.value("held_out_edges", std::size_t{0});
    split.stats.remainder_nodes = s.value("remainder_nodes", std::size_t{0});
    split.stats.remainder_edges = s.value("remainder_edges", std::size_t{0});
    split.stats.discarded_prediction_edges = s.value("discarded_prediction_edges", std::size_t{0});
    split.stats.duplicate_prediction_edges = s.value("duplicate_prediction_edges", std::size_t{0});
    split.stats.cut_time = s.value("cut_time", 0.0);
    split.stats.warnings = meta.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("split.json: ") + e.what());
  }
  validate_split(split);
  return split;
}

}  // namespace lpbias
