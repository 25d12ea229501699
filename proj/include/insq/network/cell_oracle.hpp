#pragma once

#include <span>
#include <vector>

#include "insq/network/graph.hpp"

namespace insq::net {

struct CellSample {
  NetworkPosition pos;
  std::vector<SiteId> knn;  // brute-force k nearest, ascending by key
  bool in_cell = false;     // knn equals the subset as a set
};

// Brute-force order-k cell membership of evenly spaced interior points of
// every edge, with k = |subset|. One shortest-path run per site. For tests
// and acceptance checks only.
std::vector<CellSample> order_k_network_cell_oracle(const Graph& g, std::span<const SiteId> sites,
                                                    std::span<const SiteId> subset,
                                                    std::size_t samples_per_edge);

}  // namespace insq::net
