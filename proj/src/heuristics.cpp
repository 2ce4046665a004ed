#include "lpbias/heuristics.hpp"

#include <cassert>
#include <cmath>
#include <ostream>

#include "lpbias/error.hpp"
#include "lpbias/text_format.hpp"

namespace lpbias {
namespace {

void require_distinct(NodeId u, NodeId v) {
  if (u == v) throw ContractViolation("pair heuristics need two distinct nodes");
}

template <class Visit>
void for_each_common(const Graph& g, NodeId u, NodeId v, Visit&& visit) {
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      visit(*i);
      ++i;
      ++j;
    }
  }
}

}  // namespace

std::uint64_t common_neighbors(const Graph& g, NodeId u, NodeId v) {
  require_distinct(u, v);
  std::uint64_t count = 0;
  for_each_common(g, u, v, [&](NodeId) { ++count; });
  return count;
}

double adamic_adar(const Graph& g, NodeId u, NodeId v) {
  require_distinct(u, v);
  double sum = 0.0;
  for_each_common(g, u, v, [&](NodeId w) {
    assert(g.degree(w) >= 2);
    sum += 1.0 / std::log(static_cast<double>(g.degree(w)));
  });
  return sum;
}

std::uint64_t preferential_attachment(const Graph& g, NodeId u, NodeId v) {
  require_distinct(u, v);
  return static_cast<std::uint64_t>(g.degree(u)) * g.degree(v);
}

double jaccard(const Graph& g, NodeId u, NodeId v) {
  const auto cn = common_neighbors(g, u, v);
  const auto uni = g.degree(u) + g.degree(v) - cn;
  return uni == 0 ? 0.0 : static_cast<double>(cn) / static_cast<double>(uni);
}

double resource_allocation(const Graph& g, NodeId u, NodeId v) {
  require_distinct(u, v);
  double sum = 0.0;
  for_each_common(g, u, v, [&](NodeId w) { sum += 1.0 / static_cast<double>(g.degree(w)); });
  return sum;
}

HeuristicVector feature_vector(const Graph& g, NodeId u, NodeId v) {
  require_distinct(u, v);
  HeuristicVector h;
  for_each_common(g, u, v, [&](NodeId w) {
    const auto d = static_cast<double>(g.degree(w));
    ++h.cn;
    h.aa += 1.0 / std::log(d);
    h.ra += 1.0 / d;
  });
  const std::uint64_t du = g.degree(u);
  const std::uint64_t dv = g.degree(v);
  h.pa = du * dv;
  const auto uni = du + dv - h.cn;
  h.jaccard = uni == 0 ? 0.0 : static_cast<double>(h.cn) / static_cast<double>(uni);
  h.deg_lo = std::min(du, dv);
  h.deg_hi = std::max(du, dv);
  return h;
}

void write_feature_csv(std::ostream& out, const Graph& g, std::span<const NodePair> pairs) {
  out << "u,v,cn,aa,pa,jaccard,ra,deg_lo,deg_hi\n";
  for (auto [u, v] : pairs) {
    const auto h = feature_vector(g, u, v);
    out << g.label(u) << ',' << g.label(v) << ',' << h.cn << ',' << format_real(h.aa) << ',' << h.pa << ','
        << format_real(h.jaccard) << ',' << format_real(h.ra) << ',' << h.deg_lo << ',' << h.deg_hi << '\n';
  }
}

}  // namespace lpbias
