#include "lpbias/bias_audit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lpbias/error.hpp"
#include "lpbias/random.hpp"
#include "lpbias/text_format.hpp"

namespace lpbias {

const char* to_string(BiasProperty property) {
  switch (property) {
    case BiasProperty::ShortDistance: return "short_distance";
    case BiasProperty::InvolvesHub: return "involves_hub";
    case BiasProperty::IntraCommunity: return "intra_community";
  }
  return "?";
}

HubSet hub_set(const Graph& graph, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) throw ConfigError("hub fraction must lie in (0, 1)");
  if (graph.empty()) throw DataError("hub set of an empty graph");
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> degrees(n);
  for (NodeId u = 0; u < n; ++u) degrees[u] = graph.degree(u);
  std::sort(degrees.begin(), degrees.end(), std::greater<>());
  auto rank = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);

  HubSet hubs;
  hubs.top_fraction = top_fraction;
  hubs.degree_threshold = degrees[rank - 1];
  hubs.is_hub.assign(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    if (graph.degree(u) >= hubs.degree_threshold) {
      hubs.is_hub[u] = 1;
      ++hubs.member_count;
    }
  }
  return hubs;
}

bool pair_property(const AuditContext& ctx, NodeId u, NodeId v, BiasProperty property) {
  const Graph& g = *ctx.graph;
  if (u == v || g.has_edge(u, v)) throw ContractViolation("bias properties are defined for non-adjacent pairs only");
  switch (property) {
    case BiasProperty::ShortDistance:
      return distance_class(g, u, v) == DistanceClass::AtDistanceTwo;
    case BiasProperty::InvolvesHub:
      return ctx.hubs->contains(u) || ctx.hubs->contains(v);
    case BiasProperty::IntraCommunity:
      return ctx.partition->assignment[u] == ctx.partition->assignment[v];
  }
  return false;
}

PairPredicate property_predicate(const AuditContext& ctx, BiasProperty property) {
  return [ctx, property](NodeId u, NodeId v) { return pair_property(ctx, u, v, property); };
}

std::vector<std::size_t> default_k_grid(std::size_t max_k, std::span<const std::size_t> extra) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= std::min<std::size_t>(100, max_k); ++k) ks.push_back(k);
  constexpr int kPerDecade = 20;
  for (int step = 2 * kPerDecade + 1;; ++step) {
    const auto k = static_cast<std::size_t>(std::llround(std::pow(10.0, static_cast<double>(step) / kPerDecade)));
    if (k >= max_k) break;
    ks.push_back(k);
  }
  if (max_k > 100) ks.push_back(max_k);
  for (auto k : extra) {
    if (k >= 1 && k <= max_k) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

namespace {

BiasCurve curve_from_flags(const std::vector<char>& flags, const std::vector<std::uint8_t>& labels,
                           std::span<const std::size_t> ks, std::string name) {
  BiasCurve curve;
  curve.property = std::move(name);
  std::vector<std::size_t> prefix(flags.size() + 1, 0);
  std::size_t truth_hits = 0;
  std::size_t truth_total = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    prefix[i + 1] = prefix[i] + (flags[i] ? 1 : 0);
    if (labels[i]) {
      ++truth_total;
      truth_hits += flags[i] ? 1 : 0;
    }
  }
  for (auto k : ks) {
    if (k == 0 || k > flags.size()) {
      throw ConfigError("fraction@k: k = " + std::to_string(k) + " outside 1.." + std::to_string(flags.size()));
    }
    curve.ks.push_back(k);
    curve.count.push_back(prefix[k]);
    curve.fraction.push_back(static_cast<double>(prefix[k]) / static_cast<double>(k));
  }
  curve.ground_truth_ref = truth_total ? static_cast<double>(truth_hits) / static_cast<double>(truth_total) : 0.0;
  curve.dataset_ref = flags.empty() ? 0.0 : static_cast<double>(prefix.back()) / static_cast<double>(flags.size());
  return curve;
}

}  // namespace

BiasCurve fraction_at_k(const ScoredRanking& ranking, const PairPredicate& predicate, std::span<const std::size_t> ks,
                        std::string property_name) {
  const auto& e = ranking.entries();
  std::vector<char> flags(e.size());
  std::vector<std::uint8_t> labels(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    flags[i] = predicate(e[i].pair.first, e[i].pair.second) ? 1 : 0;
    labels[i] = e[i].label;
  }
  return curve_from_flags(flags, labels, ks, std::move(property_name));
}

BiasCurve perfect_prediction_reference(const EvalSample& sample, const PairPredicate& predicate,
                                       std::span<const std::size_t> ks, std::uint64_t seed,
                                       std::string property_name) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < sample.size(); ++i) (sample.labels[i] ? pos : neg).push_back(i);
  Rng rng = make_rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<char> flags;
  std::vector<std::uint8_t> labels;
  flags.reserve(sample.size());
  labels.reserve(sample.size());
  for (auto* group : {&pos, &neg}) {
    for (auto i : *group) {
      flags.push_back(predicate(sample.pairs[i].first, sample.pairs[i].second) ? 1 : 0);
      labels.push_back(sample.labels[i]);
    }
  }
  return curve_from_flags(flags, labels, ks, std::move(property_name));
}

void write_bias_csv(std::ostream& out, const BiasCurve& curve) {
  out << "k,fraction,ground_truth_ref,dataset_ref\n";
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    out << curve.ks[i] << ',' << format_real(curve.fraction[i]) << ',' << format_real(curve.ground_truth_ref) << ','
        << format_real(curve.dataset_ref) << '\n';
  }
}

}  // namespace lpbias
