#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lpbias/graph.hpp"
#include "lpbias/split.hpp"

namespace lpbias {

enum class SampleKind { RatioPreserving, PositiveQuota };

/// Labelled candidate pairs: non-adjacent in the learning graph, label 1 iff
/// the pair is a prediction edge.
struct EvalSample {
  SampleKind kind = SampleKind::RatioPreserving;
  std::vector<NodePair> pairs;
  std::vector<std::uint8_t> labels;
  std::size_t target_size = 0;     ///< requested size (ratio) or positive quota
  std::size_t min_positives = 0;
  double population_ratio = 0.0;   ///< |prediction| / candidate population
  double realized_positive_ratio = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return pairs.size(); }
  std::size_t positives() const;
};

/// Number of unordered pairs not joined in the learning graph.
std::uint64_t candidate_population(const Graph& learning);

/// target_size pairs whose positive count is
/// max(min_positives, round(target_size * |prediction| / population)).
EvalSample build_ratio_sample(const Split& split, std::size_t target_size = 500'000, std::size_t min_positives = 10,
                              std::uint64_t seed = 0);

/// Uniform distinct candidate pairs drawn until `n_positives` of them are
/// prediction edges; every drawn pair is kept.
EvalSample build_positive_quota_sample(const Split& split, std::size_t n_positives = 1000, std::uint64_t seed = 0);

struct RankedPair {
  NodePair pair;
  double score = 0.0;
  std::uint8_t label = 0;
};

/// Pairs sorted by score descending, then canonical pair ascending.
class ScoredRanking {
 public:
  ScoredRanking() = default;
  ScoredRanking(std::span<const NodePair> pairs, std::span<const double> scores, std::span<const std::uint8_t> labels);

  const std::vector<RankedPair>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t positives() const noexcept { return positives_; }
  std::size_t negatives() const noexcept { return entries_.size() - positives_; }

 private:
  std::vector<RankedPair> entries_;
  std::size_t positives_ = 0;
};

double average_precision(const ScoredRanking& ranking);
/// Mann-Whitney form with mean ranks for tied scores.
double auroc(const ScoredRanking& ranking);
std::vector<std::pair<std::size_t, double>> precision_at_k(const ScoredRanking& ranking, std::span<const std::size_t> ks);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation, 0 for a single value
};

Summary summarize(std::span<const double> values);

}  // namespace lpbias
