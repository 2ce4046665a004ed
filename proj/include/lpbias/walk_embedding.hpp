#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lpbias/embedding.hpp"
#include "lpbias/graph.hpp"
#include "lpbias/random.hpp"

namespace lpbias {

/// Parameters of the biased second-order walks and the skip-gram trainer.
struct WalkConfig {
  double p = 1.0;  ///< return parameter
  double q = 1.0;  ///< in-out parameter
  std::size_t walk_length = 80;
  std::size_t walks_per_node = 10;
  std::size_t window = 10;
  std::size_t negatives_per_positive = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  ///< decays linearly towards 1e-4 of its start value

  void validate() const;
};

/// Walker alias method over a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }

  template <class Gen>
  std::size_t sample(Gen& gen) const {
    std::uniform_int_distribution<std::size_t> slot(0, prob_.size() - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const std::size_t i = slot(gen);
    return coin(gen) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Second-order walk transitions: from `cur` reached via `prev`, a neighbor x
/// has weight 1/p if x == prev, 1 if x is adjacent to prev, 1/q otherwise.
/// Per-edge alias tables are used when their total size fits `alias_budget`
/// entries; larger graphs fall back to exact rejection sampling.
class BiasedWalker {
 public:
  static constexpr std::size_t kDefaultAliasBudget = std::size_t{1} << 23;

  BiasedWalker(const Graph& graph, double p, double q, std::size_t alias_budget = kDefaultAliasBudget);

  bool uses_alias_tables() const noexcept { return !edge_tables_.empty(); }

  /// Next node after moving prev -> cur. `prev` must be a neighbor of `cur`.
  NodeId step(NodeId prev, NodeId cur, Rng& rng) const;

  /// Walk of at most `length` nodes starting at `start` (shorter only when it
  /// reaches an isolated node).
  std::vector<NodeId> walk(NodeId start, std::size_t length, Rng& rng) const;

  /// Unnormalized transition weight of `next` given prev -> cur.
  double weight(NodeId prev, NodeId cur, NodeId next) const;

 private:
  std::size_t step_index(NodeId prev, std::size_t edge_pos, NodeId cur, Rng& rng) const;

  const Graph* graph_;
  double p_;
  double q_;
  double max_weight_;
  std::vector<std::size_t> offsets_;
  std::vector<AliasTable> edge_tables_;  ///< indexed by CSR position of the directed edge prev->cur
};

std::vector<std::vector<NodeId>> generate_walks(const Graph& graph, const WalkConfig& config, std::uint64_t seed);

struct WalkTrainingReport {
  std::vector<double> epoch_loss;  ///< mean negative-sampling loss per epoch
  bool alias_tables = true;
  bool deterministic = true;
  std::size_t corpus_tokens = 0;
};

/// Skip-gram with negative sampling over a fixed walk corpus.
EmbeddingMatrix train_skipgram(std::size_t node_count, const std::vector<std::vector<NodeId>>& walks,
                               const WalkConfig& config, std::size_t dim, std::uint64_t seed,
                               WalkTrainingReport* report = nullptr);

/// Walk generation followed by skip-gram training; deterministic for a seed.
EmbeddingMatrix train_biased_walk_embedding(const Graph& graph, const WalkConfig& config, std::size_t dim,
                                            std::uint64_t seed, WalkTrainingReport* report = nullptr);

}  // namespace lpbias
