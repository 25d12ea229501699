#include "insq/network/cell_oracle.hpp"

#include <algorithm>

#include "insq/error.hpp"
#include "insq/network/shortest_path.hpp"

namespace insq::net {

std::vector<CellSample> order_k_network_cell_oracle(const Graph& g, std::span<const SiteId> sites,
                                                    std::span<const SiteId> subset,
                                                    std::size_t samples_per_edge) {
  const std::size_t k = subset.size();
  if (k < 1 || k > sites.size()) {
    throw Error(ErrorCode::kInvalidArgument, "subset size must be in [1, sites]");
  }
  std::vector<SiteId> target(subset.begin(), subset.end());
  std::sort(target.begin(), target.end());

  std::vector<std::vector<double>> dist;
  std::vector<NetworkPosition> origin;
  for (SiteId s : sites) {
    origin.push_back(g.position_of(s));
    dist.push_back(distances_from(g, origin.back()));
  }

  std::vector<CellSample> out;
  for (const Edge& e : g.edges()) {
    for (std::size_t j = 0; j < samples_per_edge; ++j) {
      const double offset =
          e.length * (static_cast<double>(j) + 0.5) / static_cast<double>(samples_per_edge);
      CellSample sample;
      sample.pos = {e.id, offset};
      std::vector<SiteId> ids(sites.begin(), sites.end());
      sort_by_key(ids, [&](SiteId id) {
        const auto i = static_cast<std::size_t>(std::find(sites.begin(), sites.end(), id) -
                                                sites.begin());
        return distance_to(g, dist[i], origin[i], sample.pos);
      });
      ids.resize(k);
      sample.knn = ids;
      std::sort(ids.begin(), ids.end());
      sample.in_cell = ids == target;
      out.push_back(std::move(sample));
    }
  }
  return out;
}

}  // namespace insq::net
