#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>

#include "lpbias/graph.hpp"

namespace lpbias {

/// The five neighborhood scores plus both endpoint degrees, as used for the
/// supervised heuristic predictor.
struct HeuristicVector {
  std::uint64_t cn = 0;  ///< common neighbors
  double aa = 0.0;       ///< Adamic-Adar, natural log
  std::uint64_t pa = 0;  ///< preferential attachment (degree product)
  double jaccard = 0.0;
  double ra = 0.0;       ///< resource allocation
  std::uint64_t deg_lo = 0;
  std::uint64_t deg_hi = 0;

  static constexpr std::size_t kDim = 7;
  std::array<double, kDim> as_features() const {
    return {static_cast<double>(cn), aa, static_cast<double>(pa), jaccard, ra,
            static_cast<double>(deg_lo), static_cast<double>(deg_hi)};
  }
  bool operator==(const HeuristicVector&) const = default;
};

std::uint64_t common_neighbors(const Graph& g, NodeId u, NodeId v);
double adamic_adar(const Graph& g, NodeId u, NodeId v);
std::uint64_t preferential_attachment(const Graph& g, NodeId u, NodeId v);
/// Zero when both neighborhoods are empty.
double jaccard(const Graph& g, NodeId u, NodeId v);
double resource_allocation(const Graph& g, NodeId u, NodeId v);

/// All scores from a single merge of the two sorted neighbor lists.
HeuristicVector feature_vector(const Graph& g, NodeId u, NodeId v);

/// Writes `u,v,cn,aa,pa,jaccard,ra,deg_lo,deg_hi` rows (17 significant digits).
void write_feature_csv(std::ostream& out, const Graph& g, std::span<const NodePair> pairs);

}  // namespace lpbias
