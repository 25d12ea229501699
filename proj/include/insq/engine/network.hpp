#pragma once

#include <memory>
#include <span>
#include <vector>

#include "insq/engine/query.hpp"
#include "insq/network/network_voronoi.hpp"

namespace insq::engine {

// Live state of one moving query on a road network. `subnet` covers the
// Voronoi cells of R and I(R), which is knn + influential.
struct NetQueryState {
  QueryConfig config;
  std::vector<SiteId> prefetch;
  std::vector<SiteId> knn;
  std::vector<SiteId> influential;
  std::vector<SiteId> prefetch_ins;
  Metrics metrics;
  std::shared_ptr<const net::Subnetwork> subnet;
  std::uint64_t subnet_builds = 0;
};

std::vector<SiteId> network_influential_neighbor_set(const net::NetworkVoronoi& nv,
                                                     std::span<const SiteId> subset);

// Throws kTooFewSites when floor(rho * k) exceeds the number of sites.
NetQueryState init_query_net(const net::Graph& g, const net::NetworkVoronoi& nv,
                             const net::NetworkPosition& q, const QueryConfig& config);

// Distances come from one search over the cached subnetwork. A query
// outside the subnetwork is reported invalid with no candidate. `visited`
// receives the subnetwork vertices the search settled.
ValidationResult validate_net(const NetQueryState& state, const net::NetworkPosition& q,
                              std::vector<net::VertexId>* visited = nullptr);

// Same tiers as the planar update: re-rank inside R, swap one site into R,
// full recomputation.
std::pair<NetQueryState, TickEvent> apply_update_net(const net::Graph& g,
                                                     const net::NetworkVoronoi& nv,
                                                     const NetQueryState& state,
                                                     const net::NetworkPosition& q,
                                                     const ValidationResult& result);

// Distances from q to the given sites measured on the cached subnetwork;
// infinity when q or a site is not covered by it.
std::vector<double> subnet_distances(const NetQueryState& state, const net::NetworkPosition& q,
                                     std::span<const SiteId> ids);

TickOutcome tick_net(const net::Graph& g, const net::NetworkVoronoi& nv, NetQueryState& state,
                     const net::NetworkPosition& q);

}  // namespace insq::engine
