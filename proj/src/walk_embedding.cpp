#include "lpbias/walk_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpbias/error.hpp"

namespace lpbias {

void WalkConfig::validate() const {
  if (!(p > 0.0) || !(q > 0.0)) throw ConfigError("walk parameters p and q must be positive");
  if (walk_length == 0 || walks_per_node == 0 || window == 0 || negatives_per_positive == 0 || epochs == 0) {
    throw ConfigError("walk lengths, counts, window, negatives and epochs must be positive");
  }
  if (window >= walk_length) throw ConfigError("window must be shorter than the walk length");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw ContractViolation("alias table over an empty distribution");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ContractViolation("alias table weights must have a positive sum");
  prob_.resize(n);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    auto s = small.back();
    small.pop_back();
    auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) prob_[i] = 1.0;
  for (auto i : small) prob_[i] = 1.0;  // numerical leftovers
}

BiasedWalker::BiasedWalker(const Graph& graph, double p, double q, std::size_t alias_budget)
    : graph_(&graph), p_(p), q_(q), max_weight_(std::max({1.0 / p, 1.0, 1.0 / q})) {
  if (!(p > 0.0) || !(q > 0.0)) throw ConfigError("walk parameters p and q must be positive");
  const std::size_t n = graph.node_count();
  offsets_.assign(n + 1, 0);
  std::size_t table_entries = 0;
  for (NodeId u = 0; u < n; ++u) {
    offsets_[u + 1] = offsets_[u] + graph.degree(u);
    table_entries += graph.degree(u) * graph.degree(u);
  }
  if (table_entries > alias_budget) return;

  edge_tables_.resize(offsets_[n]);
  std::vector<double> weights;
  for (NodeId prev = 0; prev < n; ++prev) {
    auto out = graph.neighbors(prev);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const NodeId cur = out[k];
      auto next = graph.neighbors(cur);
      weights.assign(next.size(), 0.0);
      for (std::size_t j = 0; j < next.size(); ++j) weights[j] = weight(prev, cur, next[j]);
      edge_tables_[offsets_[prev] + k] = AliasTable(weights);
    }
  }
}

double BiasedWalker::weight(NodeId prev, NodeId cur, NodeId next) const {
  (void)cur;
  if (next == prev) return 1.0 / p_;
  if (graph_->has_edge(prev, next)) return 1.0;
  return 1.0 / q_;
}

std::size_t BiasedWalker::step_index(NodeId prev, std::size_t edge_pos, NodeId cur, Rng& rng) const {
  if (!edge_tables_.empty()) return edge_tables_[edge_pos].sample(rng);
  auto next = graph_->neighbors(cur);
  std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    const std::size_t j = pick(rng);
    if (coin(rng) * max_weight_ < weight(prev, cur, next[j])) return j;
  }
}

NodeId BiasedWalker::step(NodeId prev, NodeId cur, Rng& rng) const {
  auto out = graph_->neighbors(prev);
  auto it = std::lower_bound(out.begin(), out.end(), cur);
  if (it == out.end() || *it != cur) throw ContractViolation("walk step along a non-edge");
  const std::size_t edge_pos = offsets_[prev] + static_cast<std::size_t>(it - out.begin());
  return graph_->neighbors(cur)[step_index(prev, edge_pos, cur, rng)];
}

std::vector<NodeId> BiasedWalker::walk(NodeId start, std::size_t length, Rng& rng) const {
  std::vector<NodeId> path;
  path.reserve(length);
  path.push_back(start);
  if (length < 2 || graph_->degree(start) == 0) return path;
  auto first = graph_->neighbors(start);
  std::uniform_int_distribution<std::size_t> pick(0, first.size() - 1);
  std::size_t k = pick(rng);
  path.push_back(first[k]);
  std::size_t edge_pos = offsets_[start] + k;
  while (path.size() < length) {
    const NodeId prev = path[path.size() - 2];
    const NodeId cur = path.back();
    const std::size_t j = step_index(prev, edge_pos, cur, rng);
    path.push_back(graph_->neighbors(cur)[j]);
    edge_pos = offsets_[cur] + j;
  }
  return path;
}

std::vector<std::vector<NodeId>> generate_walks(const Graph& graph, const WalkConfig& config, std::uint64_t seed) {
  config.validate();
  BiasedWalker walker(graph, config.p, config.q);
  Rng rng = make_rng(derive_seed(seed, "walks"));
  std::vector<NodeId> order(graph.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<std::vector<NodeId>> walks;
  walks.reserve(graph.node_count() * config.walks_per_node);
  for (std::size_t r = 0; r < config.walks_per_node; ++r) {
    std::shuffle(order.begin(), order.end(), rng);
    for (NodeId start : order) walks.push_back(walker.walk(start, config.walk_length, rng));
  }
  return walks;
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

EmbeddingMatrix train_skipgram(std::size_t node_count, const std::vector<std::vector<NodeId>>& walks,
                               const WalkConfig& config, std::size_t dim, std::uint64_t seed,
                               WalkTrainingReport* report) {
  config.validate();
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  Rng rng = make_rng(derive_seed(seed, "skipgram"));

  std::vector<double> counts(node_count, 0.0);
  std::size_t tokens = 0;
  for (const auto& w : walks) {
    for (NodeId u : w) counts[u] += 1.0;
    tokens += w.size();
  }
  for (auto& c : counts) c = std::pow(c, 0.75);
  if (tokens == 0) throw DataError("empty walk corpus");
  AliasTable noise(counts);

  EmbeddingMatrix input(node_count, dim, "walk");
  std::vector<double> output(node_count * dim, 0.0);
  {
    std::uniform_real_distribution<double> init(-0.5 / static_cast<double>(dim), 0.5 / static_cast<double>(dim));
    for (NodeId u = 0; u < node_count; ++u) {
      for (double& x : input.row(u)) x = init(rng);
    }
  }

  WalkTrainingReport local;
  local.corpus_tokens = tokens;
  const double total_steps = static_cast<double>(tokens * config.epochs);
  double processed = 0.0;
  std::vector<double> grad(dim);
  std::uniform_int_distribution<std::size_t> shrink(1, config.window);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t pairs = 0;
    for (const auto& w : walks) {
      for (std::size_t i = 0; i < w.size(); ++i, processed += 1.0) {
        const double lr = config.learning_rate * std::max(1e-4, 1.0 - processed / total_steps);
        const std::size_t b = shrink(rng);
        const std::size_t lo = i >= b ? i - b : 0;
        const std::size_t hi = std::min(w.size() - 1, i + b);
        auto center = input.row(w[i]);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t s = 0; s <= config.negatives_per_positive; ++s) {
            NodeId target;
            double label;
            if (s == 0) {
              target = w[j];
              label = 1.0;
            } else {
              target = static_cast<NodeId>(noise.sample(rng));
              if (target == w[j]) continue;
              label = 0.0;
            }
            double* out = output.data() + static_cast<std::size_t>(target) * dim;
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += center[k] * out[k];
            loss -= label > 0.5 ? log_sigmoid(dot) : log_sigmoid(-dot);
            const double g = lr * (label - sigmoid(dot));
            for (std::size_t k = 0; k < dim; ++k) {
              grad[k] += g * out[k];
              out[k] += g * center[k];
            }
          }
          for (std::size_t k = 0; k < dim; ++k) center[k] += grad[k];
          ++pairs;
        }
      }
    }
    local.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  if (report) *report = std::move(local);
  return input;
}

EmbeddingMatrix train_biased_walk_embedding(const Graph& graph, const WalkConfig& config, std::size_t dim,
                                            std::uint64_t seed, WalkTrainingReport* report) {
  if (graph.empty()) throw DataError("cannot embed an empty graph");
  config.validate();
  auto walks = generate_walks(graph, config, seed);
  WalkTrainingReport local;
  auto matrix = train_skipgram(graph.node_count(), walks, config, dim, seed, &local);
  std::size_t table_entries = 0;
  for (NodeId u = 0; u < graph.node_count(); ++u) table_entries += graph.degree(u) * graph.degree(u);
  local.alias_tables = table_entries <= BiasedWalker::kDefaultAliasBudget;
  matrix.set_method_tag("walk(p=" + std::to_string(config.p) + ",q=" + std::to_string(config.q) + ")");
  if (report) *report = std::move(local);
  return matrix;
}

}  // namespace lpbias
