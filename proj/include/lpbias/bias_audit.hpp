#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lpbias/community.hpp"
#include "lpbias/evaluation.hpp"
#include "lpbias/graph.hpp"

namespace lpbias {

enum class BiasProperty { ShortDistance, InvolvesHub, IntraCommunity };

inline constexpr BiasProperty kAllBiasProperties[] = {BiasProperty::ShortDistance, BiasProperty::InvolvesHub,
                                                      BiasProperty::IntraCommunity};

const char* to_string(BiasProperty property);

struct HubSet {
  std::vector<char> is_hub;  ///< indexed by node id
  std::size_t degree_threshold = 0;
  double top_fraction = 0.1;
  std::size_t member_count = 0;

  bool contains(NodeId u) const { return is_hub[u] != 0; }
};

/// Threshold = degree of the node at rank ceil(top_fraction * n) by
/// decreasing degree; every node at or above it is a hub.
HubSet hub_set(const Graph& graph, double top_fraction = 0.1);

/// Everything a pair property is evaluated against; all of it derives from
/// the learning graph.
struct AuditContext {
  const Graph* graph = nullptr;
  const Partition* partition = nullptr;
  const HubSet* hubs = nullptr;
};

bool pair_property(const AuditContext& ctx, NodeId u, NodeId v, BiasProperty property);

using PairPredicate = std::function<bool(NodeId, NodeId)>;

PairPredicate property_predicate(const AuditContext& ctx, BiasProperty property);

struct BiasCurve {
  std::string property;
  std::vector<std::size_t> ks;
  std::vector<double> fraction;
  std::vector<std::size_t> count;  ///< k * fraction, exact
  double ground_truth_ref = 0.0;   ///< among label-1 pairs
  double dataset_ref = 0.0;        ///< among all ranked pairs
};

/// k = 1..100, then about 20 log-spaced points per decade up to `max_k`;
/// `extra` values (e.g. the positive quota) are always included.
std::vector<std::size_t> default_k_grid(std::size_t max_k, std::span<const std::size_t> extra = {});

BiasCurve fraction_at_k(const ScoredRanking& ranking, const PairPredicate& predicate, std::span<const std::size_t> ks,
                        std::string property_name = {});

/// Curve of the ideal ranking: positives first (seeded shuffle), then
/// negatives (seeded shuffle).
BiasCurve perfect_prediction_reference(const EvalSample& sample, const PairPredicate& predicate,
                                       std::span<const std::size_t> ks, std::uint64_t seed,
                                       std::string property_name = {});

/// `k,fraction,ground_truth_ref,dataset_ref`
void write_bias_csv(std::ostream& out, const BiasCurve& curve);

}  // namespace lpbias
