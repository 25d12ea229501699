#include "insq/geometry/voronoi_index.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <string>

#include "delaunay.hpp"
#include "insq/error.hpp"

namespace insq::geo {

namespace {
std::atomic<std::uint64_t> g_builds{0};
}

std::uint64_t diagram_build_count() { return g_builds.load(); }
void note_diagram_build() { ++g_builds; }

std::size_t VoronoiIndex::slot(SiteId id) const {
  const auto it = slot_.find(id);
  if (it == slot_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown site id " + std::to_string(id));
  }
  return it->second;
}

const Site& VoronoiIndex::site(SiteId id) const { return sites_[slot(id)]; }

std::span<const SiteId> VoronoiIndex::neighbors(SiteId id) const { return adjacency_[slot(id)]; }

std::vector<SiteId> VoronoiIndex::nearest(const Point& q, std::size_t m) const {
  std::vector<SiteId> ids;
  ids.reserve(m);
  for (std::size_t i : tree_.nearest(sites_, q, m)) ids.push_back(sites_[i].id);
  return ids;
}

VoronoiIndex build_voronoi(std::vector<Site> sites) {
  if (sites.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one site is required");
  for (const Site& s : sites) {
    if (s.id < 0) throw Error(ErrorCode::kInvalidArgument, "site ids must be non-negative");
    if (!is_finite(s.pos)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "site " + std::to_string(s.id) + " has a non-finite coordinate");
    }
  }

  VoronoiIndex index;
  index.slot_.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!index.slot_.emplace(sites[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate site id " + std::to_string(sites[i].id));
    }
  }
  std::map<std::pair<double, double>, SiteId> seen;
  for (const Site& s : sites) {
    const auto [it, fresh] = seen.emplace(std::pair{s.pos.x, s.pos.y}, s.id);
    if (!fresh) {
      throw Error(ErrorCode::kCoincidentSites, "sites " + std::to_string(it->second) + " and " +
                                                   std::to_string(s.id) + " coincide");
    }
  }

  std::vector<Point> points;
  points.reserve(sites.size());
  for (const Site& s : sites) points.push_back(s.pos);
  const auto adj = detail::voronoi_adjacency(points);

  index.adjacency_.resize(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    auto& out = index.adjacency_[i];
    out.reserve(adj[i].size());
    for (int j : adj[i]) out.push_back(sites[static_cast<std::size_t>(j)].id);
    std::sort(out.begin(), out.end());
  }
  index.tree_ = SpatialTree(sites);
  index.sites_ = std::move(sites);
  note_diagram_build();
  return index;
}

std::vector<SiteId> voronoi_neighbors(const VoronoiIndex& index, SiteId id) {
  const auto span = index.neighbors(id);
  return {span.begin(), span.end()};
}

std::vector<SiteId> knn_search(const VoronoiIndex& index, const Point& q, std::size_t m) {
  if (m < 1 || m > index.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "m must lie in [1, " + std::to_string(index.size()) + "], got " +
                    std::to_string(m));
  }
  return index.nearest(q, m);
}

std::vector<Site> apply_site_edits(std::vector<Site> sites, std::span<const SiteEdit> edits) {
  for (const SiteEdit& e : edits) {
    const auto it = std::find_if(sites.begin(), sites.end(),
                                 [&](const Site& s) { return s.id == e.id; });
    switch (e.kind) {
      case SiteEdit::Kind::kAdd:
        if (it != sites.end()) {
          throw Error(ErrorCode::kDuplicateId, "duplicate site id " + std::to_string(e.id));
        }
        sites.push_back({e.id, e.pos});
        break;
      case SiteEdit::Kind::kMove:
      case SiteEdit::Kind::kRemove:
        if (it == sites.end()) {
          throw Error(ErrorCode::kNotFound, "unknown site id " + std::to_string(e.id));
        }
        if (e.kind == SiteEdit::Kind::kMove) {
          it->pos = e.pos;
        } else {
          sites.erase(it);
        }
        break;
    }
  }
  return sites;
}

VoronoiIndex update_sites(const VoronoiIndex& index, std::span<const SiteEdit> edits) {
  return build_voronoi(apply_site_edits(index.sites(), edits));
}

}  // namespace insq::geo
