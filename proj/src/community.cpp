#include "lpbias/community.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "lpbias/error.hpp"
#include "lpbias/random.hpp"

namespace lpbias {

Partition Partition::from_labels(const std::vector<std::uint32_t>& labels) {
  Partition p;
  p.assignment.resize(labels.size());
  std::unordered_map<std::uint32_t, std::uint32_t> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = ids.emplace(labels[i], static_cast<std::uint32_t>(ids.size()));
    p.assignment[i] = it->second;
  }
  p.community_count = ids.size();
  return p;
}

double WeightedGraph::degree(std::uint32_t u) const {
  double d = 2.0 * loops[u];
  for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e) d += weights[e];
  return d;
}

WeightedGraph WeightedGraph::from_graph(const Graph& graph) {
  WeightedGraph w;
  const std::size_t n = graph.node_count();
  w.offsets.assign(n + 1, 0);
  w.loops.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    auto nb = graph.neighbors(u);
    w.offsets[u + 1] = w.offsets[u] + nb.size();
    w.targets.insert(w.targets.end(), nb.begin(), nb.end());
  }
  w.weights.assign(w.targets.size(), 1.0);
  w.total_weight = static_cast<double>(graph.edge_count());
  return w;
}

WeightedGraph aggregate(const WeightedGraph& graph, const Partition& partition) {
  const std::size_t k = partition.community_count;
  const auto& c = partition.assignment;
  WeightedGraph out;
  out.loops.assign(k, 0.0);
  out.total_weight = graph.total_weight;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(k);
  for (std::uint32_t u = 0; u < graph.node_count(); ++u) {
    out.loops[c[u]] += graph.loops[u];
    for (std::size_t e = graph.offsets[u]; e < graph.offsets[u + 1]; ++e) {
      const auto v = graph.targets[e];
      if (c[u] == c[v]) {
        out.loops[c[u]] += 0.5 * graph.weights[e];  // each internal edge is seen from both ends
      } else {
        rows[c[u]].emplace_back(c[v], graph.weights[e]);
      }
    }
  }
  out.offsets.assign(k + 1, 0);
  for (std::size_t a = 0; a < k; ++a) {
    auto& r = rows[a];
    std::sort(r.begin(), r.end());
    std::size_t write = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (write > 0 && r[write - 1].first == r[i].first) {
        r[write - 1].second += r[i].second;
      } else {
        r[write++] = r[i];
      }
    }
    r.resize(write);
    for (auto& [t, wt] : r) {
      out.targets.push_back(t);
      out.weights.push_back(wt);
    }
    out.offsets[a + 1] = out.targets.size();
  }
  return out;
}

double modularity(const WeightedGraph& graph, const Partition& partition) {
  if (!(graph.total_weight > 0.0)) throw DataError("modularity of a graph without edges");
  if (partition.assignment.size() != graph.node_count()) throw ContractViolation("partition does not cover the graph");
  const double m = graph.total_weight;
  std::vector<double> internal(partition.community_count, 0.0);
  std::vector<double> total(partition.community_count, 0.0);
  for (std::uint32_t u = 0; u < graph.node_count(); ++u) {
    const auto cu = partition.assignment[u];
    internal[cu] += graph.loops[u];
    total[cu] += 2.0 * graph.loops[u];
    for (std::size_t e = graph.offsets[u]; e < graph.offsets[u + 1]; ++e) {
      total[cu] += graph.weights[e];
      if (partition.assignment[graph.targets[e]] == cu) internal[cu] += 0.5 * graph.weights[e];
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < partition.community_count; ++c) {
    const double share = total[c] / (2.0 * m);
    q += internal[c] / m - share * share;
  }
  return q;
}

double modularity(const Graph& graph, const Partition& partition) {
  if (graph.edge_count() == 0) throw DataError("modularity of a graph without edges");
  return modularity(WeightedGraph::from_graph(graph), partition);
}

namespace {

constexpr double kMinGain = 1e-13;

struct LevelOutcome {
  std::vector<std::uint32_t> community;
  bool moved = false;
};

// Repeated sweeps of single-node moves until a sweep makes no move.
LevelOutcome local_moving(const WeightedGraph& g, Rng& rng, std::vector<double>& sweep_trace) {
  const std::size_t n = g.node_count();
  const double m = g.total_weight;
  LevelOutcome out;
  out.community.resize(n);
  std::iota(out.community.begin(), out.community.end(), 0u);
  std::vector<double> degree(n);
  std::vector<double> total(n);
  std::vector<double> internal(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    degree[u] = g.degree(u);
    total[u] = degree[u];
    internal[u] = g.loops[u];
  }
  auto current_q = [&] {
    double q = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (total[c] == 0.0 && internal[c] == 0.0) continue;
      const double share = total[c] / (2.0 * m);
      q += internal[c] / m - share * share;
    }
    return q;
  };

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> link(n, 0.0);  // weight from the current node into each community
  std::vector<std::uint32_t> touched;
  bool moved_in_sweep = true;
  while (moved_in_sweep) {
    moved_in_sweep = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::uint32_t u : order) {
      const std::uint32_t own = out.community[u];
      touched.clear();
      for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
        const auto c = out.community[g.targets[e]];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += g.weights[e];
      }
      // take u out of its community
      const double own_link = link[own];
      total[own] -= degree[u];
      internal[own] -= own_link + g.loops[u];

      auto gain = [&](std::uint32_t c) { return link[c] / m - total[c] * degree[u] / (2.0 * m * m); };
      const double own_gain = gain(own);
      std::uint32_t best = own;
      double best_gain = own_gain;
      for (auto c : touched) {
        if (c == own) continue;
        const double gc = gain(c);
        if (gc > best_gain + kMinGain || (std::abs(gc - best_gain) <= kMinGain && c < best && best != own)) {
          best = c;
          best_gain = gc;
        }
      }
      if (best != own && !(best_gain > own_gain + kMinGain)) best = own;

      total[best] += degree[u];
      internal[best] += link[best] + g.loops[u];
      out.community[u] = best;
      if (best != own) {
        moved_in_sweep = true;
        out.moved = true;
      }
      for (auto c : touched) link[c] = 0.0;
    }
    sweep_trace.push_back(current_q());
  }
  return out;
}

}  // namespace

LouvainResult louvain(const Graph& graph, std::uint64_t seed, std::size_t max_passes) {
  if (graph.edge_count() == 0) throw DataError("louvain on a graph without edges");
  LouvainResult result;
  Rng rng = make_rng(derive_seed(seed, "louvain"));
  WeightedGraph level_graph = WeightedGraph::from_graph(graph);
  std::vector<std::uint32_t> membership(graph.node_count());
  std::iota(membership.begin(), membership.end(), 0u);

  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    auto outcome = local_moving(level_graph, rng, result.sweep_modularity);
    if (!outcome.moved) break;
    auto level_partition = Partition::from_labels(outcome.community);
    for (auto& c : membership) c = level_partition.assignment[c];
    level_graph = aggregate(level_graph, level_partition);
    ++result.levels;

    Partition singletons;
    singletons.assignment.resize(level_graph.node_count());
    std::iota(singletons.assignment.begin(), singletons.assignment.end(), 0u);
    singletons.community_count = level_graph.node_count();
    result.aggregated_modularity.push_back(modularity(level_graph, singletons));
    result.projected_modularity.push_back(modularity(graph, Partition::from_labels(membership)));
  }
  result.partition = Partition::from_labels(membership);
  return result;
}

void write_partition_csv(std::ostream& out, const Graph& graph, const Partition& partition) {
  out << "node_label,community_id\n";
  for (NodeId u = 0; u < graph.node_count(); ++u) out << graph.label(u) << ',' << partition.assignment[u] << '\n';
}

}  // namespace lpbias
