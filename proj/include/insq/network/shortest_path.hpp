#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "insq/network/graph.hpp"

namespace insq::net {

inline constexpr double kRelativeTolerance = 1e-9;

// |a - b| <= 1e-9 * max(|a|, |b|).
bool nearly_equal(double a, double b);

// Network distance paired with a site id. Distances within the relative
// tolerance compare as equal, so the lower id wins. Not transitive at the
// tolerance edge; sort with std::stable_sort.
struct NetworkDistanceKey {
  double d = 0.0;
  SiteId id = 0;
};

bool operator<(const NetworkDistanceKey& a, const NetworkDistanceKey& b);

// Single-source shortest distances from a position to every vertex, indexed
// by vertex index. `visited`, when given, receives the id of every vertex
// settled by the search.
std::vector<double> distances_from(const Graph& g, const NetworkPosition& src,
                                   std::vector<VertexId>* visited = nullptr);

// Distance to `dst` given the vertex distances from `src`.
double distance_to(const Graph& g, std::span<const double> dist, const NetworkPosition& src,
                   const NetworkPosition& dst);

double network_distance(const Graph& g, const NetworkPosition& a, const NetworkPosition& b);

// The m site vertices nearest to q by NetworkDistanceKey, ascending. Sites
// must be vertices of g. Throws kInvalidArgument unless 1 <= m <= sites.
std::vector<SiteId> nearest_sites(const Graph& g, std::span<const SiteId> sites,
                                  const NetworkPosition& q, std::size_t m);

// Sorts ids by key, given per-id distances. The result does not depend on
// the input order.
template <typename DistanceFn>
void sort_by_key(std::vector<SiteId>& ids, DistanceFn&& distance) {
  std::vector<NetworkDistanceKey> keys;
  keys.reserve(ids.size());
  for (SiteId id : ids) keys.push_back({distance(id), id});
  std::sort(keys.begin(), keys.end(),
            [](const NetworkDistanceKey& a, const NetworkDistanceKey& b) { return a.id < b.id; });
  std::stable_sort(keys.begin(), keys.end(),
                   [](const NetworkDistanceKey& a, const NetworkDistanceKey& b) { return a < b; });
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = keys[i].id;
}

}  // namespace insq::net
