#include "lpbias/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "lpbias/error.hpp"
#include "lpbias/random.hpp"

namespace lpbias {

std::size_t EvalSample::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

std::uint64_t candidate_population(const Graph& learning) {
  const std::uint64_t n = learning.node_count();
  return n * (n - 1) / 2 - learning.edge_count();
}

namespace {

std::unordered_set<std::uint64_t> prediction_keys(const Split& split) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(split.prediction.size() * 2);
  for (auto [u, v] : split.prediction) keys.insert(pair_key(u, v));
  return keys;
}

void finish_sample(EvalSample& s) {
  s.realized_positive_ratio = s.pairs.empty() ? 0.0 : static_cast<double>(s.positives()) / static_cast<double>(s.size());
}

}  // namespace

EvalSample build_ratio_sample(const Split& split, std::size_t target_size, std::size_t min_positives,
                              std::uint64_t seed) {
  const auto& g = split.learning;
  if (split.prediction.empty()) throw DataError("prediction set is empty");
  if (split.prediction.size() < min_positives) {
    throw DataError("prediction set has " + std::to_string(split.prediction.size()) + " edges, fewer than the " +
                    std::to_string(min_positives) + " required positives");
  }
  const std::uint64_t population = candidate_population(g);
  if (target_size > population) {
    throw ConfigError("sample size " + std::to_string(target_size) + " exceeds the candidate population " +
                      std::to_string(population));
  }
  const double ratio = static_cast<double>(split.prediction.size()) / static_cast<double>(population);
  const auto proportional = static_cast<std::size_t>(std::llround(static_cast<double>(target_size) * ratio));
  const std::size_t k = std::min(std::max(min_positives, proportional), std::min(target_size, split.prediction.size()));
  if (target_size - k > population - split.prediction.size()) {
    throw ConfigError("not enough negative pairs for the requested sample size");
  }

  EvalSample s;
  s.kind = SampleKind::RatioPreserving;
  s.target_size = target_size;
  s.min_positives = min_positives;
  s.population_ratio = ratio;
  s.seed = seed;
  s.pairs.reserve(target_size);
  s.labels.reserve(target_size);

  Rng rng = make_rng(seed);
  std::vector<NodePair> positives = split.prediction;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, positives.size() - 1);
    std::swap(positives[i], positives[pick(rng)]);
    s.pairs.push_back(positives[i]);
    s.labels.push_back(1);
  }

  const auto future = prediction_keys(split);
  std::unordered_set<std::uint64_t> drawn;
  drawn.reserve((target_size - k) * 2);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.node_count() - 1));
  while (s.pairs.size() < target_size) {
    const NodeId u = node(rng);
    const NodeId v = node(rng);
    if (u == v || g.has_edge(u, v)) continue;
    const auto key = pair_key(u, v);
    if (future.count(key) || !drawn.insert(key).second) continue;
    s.pairs.push_back(canonical(u, v));
    s.labels.push_back(0);
  }
  finish_sample(s);
  return s;
}

EvalSample build_positive_quota_sample(const Split& split, std::size_t n_positives, std::uint64_t seed) {
  const auto& g = split.learning;
  if (n_positives == 0) throw ConfigError("positive quota must be at least 1");
  if (split.prediction.size() < n_positives) {
    throw DataError("prediction set has " + std::to_string(split.prediction.size()) + " edges, fewer than the quota of " +
                    std::to_string(n_positives));
  }
  const std::uint64_t population = candidate_population(g);
  EvalSample s;
  s.kind = SampleKind::PositiveQuota;
  s.target_size = n_positives;
  s.min_positives = n_positives;
  s.population_ratio = static_cast<double>(split.prediction.size()) / static_cast<double>(population);
  s.seed = seed;

  const auto future = prediction_keys(split);
  std::unordered_set<std::uint64_t> drawn;
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.node_count() - 1));
  std::size_t found = 0;
  while (found < n_positives) {
    const NodeId u = node(rng);
    const NodeId v = node(rng);
    if (u == v || g.has_edge(u, v)) continue;
    const auto key = pair_key(u, v);
    if (!drawn.insert(key).second) continue;
    const bool positive = future.count(key) > 0;
    s.pairs.push_back(canonical(u, v));
    s.labels.push_back(positive ? 1 : 0);
    found += positive;
  }
  finish_sample(s);
  return s;
}

ScoredRanking::ScoredRanking(std::span<const NodePair> pairs, std::span<const double> scores,
                             std::span<const std::uint8_t> labels) {
  if (pairs.size() != scores.size() || pairs.size() != labels.size()) {
    throw ContractViolation("ranking inputs differ in length");
  }
  entries_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (std::isnan(scores[i])) throw DataError("NaN score in ranking");
    entries_.push_back({canonical(pairs[i].first, pairs[i].second), scores[i], labels[i]});
    positives_ += labels[i] ? 1 : 0;
  }
  std::sort(entries_.begin(), entries_.end(), [](const RankedPair& a, const RankedPair& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pair < b.pair;
  });
}

double average_precision(const ScoredRanking& ranking) {
  if (ranking.positives() == 0) throw DataError("average precision needs at least one positive");
  double sum = 0.0;
  std::size_t hits = 0;
  const auto& e = ranking.entries();
  for (std::size_t r = 0; r < e.size(); ++r) {
    if (e[r].label) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(ranking.positives());
}

double auroc(const ScoredRanking& ranking) {
  const std::size_t pos = ranking.positives();
  const std::size_t neg = ranking.negatives();
  if (pos == 0 || neg == 0) throw DataError("AUROC needs both positive and negative pairs");
  const auto& e = ranking.entries();
  const double n = static_cast<double>(e.size());
  double rank_sum = 0.0;  // ascending ranks, ties at their mean
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < e.size() && e[j].score == e[i].score) {
      group_pos += e[j].label ? 1 : 0;
      ++j;
    }
    const double mean_rank = (2.0 * n - static_cast<double>(i) - static_cast<double>(j) + 1.0) / 2.0;
    rank_sum += static_cast<double>(group_pos) * mean_rank;
    i = j;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

std::vector<std::pair<std::size_t, double>> precision_at_k(const ScoredRanking& ranking,
                                                           std::span<const std::size_t> ks) {
  const auto& e = ranking.entries();
  std::vector<std::size_t> hits(e.size() + 1, 0);
  for (std::size_t r = 0; r < e.size(); ++r) hits[r + 1] = hits[r] + (e[r].label ? 1 : 0);
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(ks.size());
  for (auto k : ks) {
    if (k == 0) throw ConfigError("precision@k needs k >= 1");
    if (k > e.size()) throw ConfigError("k = " + std::to_string(k) + " exceeds the sample size");
    out.emplace_back(k, static_cast<double>(hits[k]) / static_cast<double>(k));
  }
  return out;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace lpbias
