#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "insq/geometry/point.hpp"
#include "insq/geometry/spatial_tree.hpp"

namespace insq::geo {

// Order-1 Voronoi structure over a fixed site set: per-site Voronoi
// neighbors plus a best-first search tree. Immutable once built; share it
// freely between readers.
class VoronoiIndex {
 public:
  VoronoiIndex() = default;

  const std::vector<Site>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }

  bool contains(SiteId id) const { return slot_.count(id) != 0; }
  // Throws Error(kNotFound) for unknown ids.
  const Site& site(SiteId id) const;
  // Sorted ids of the sites whose cells share a positive-length edge with
  // the cell of `id`.
  std::span<const SiteId> neighbors(SiteId id) const;

  // The m sites with the smallest DistanceKey relative to q, ascending.
  std::vector<SiteId> nearest(const Point& q, std::size_t m) const;

 private:
  friend VoronoiIndex build_voronoi(std::vector<Site> sites);

  std::size_t slot(SiteId id) const;

  std::vector<Site> sites_;
  std::unordered_map<SiteId, std::size_t> slot_;
  std::vector<std::vector<SiteId>> adjacency_;
  SpatialTree tree_;
};

// Throws kInvalidArgument on empty input or non-finite coordinates,
// kDuplicateId, kCoincidentSites.
VoronoiIndex build_voronoi(std::vector<Site> sites);

std::vector<SiteId> voronoi_neighbors(const VoronoiIndex& index, SiteId id);

// Throws kInvalidArgument unless 1 <= m <= index.size().
std::vector<SiteId> knn_search(const VoronoiIndex& index, const Point& q, std::size_t m);

struct SiteEdit {
  enum class Kind { kAdd, kMove, kRemove };
  Kind kind = Kind::kAdd;
  SiteId id = 0;
  Point pos;  // ignored for kRemove

  static SiteEdit add(SiteId id, Point p) { return {Kind::kAdd, id, p}; }
  static SiteEdit move(SiteId id, Point p) { return {Kind::kMove, id, p}; }
  static SiteEdit remove(SiteId id) { return {Kind::kRemove, id, {}}; }
};

// Applies edits in order to the index's site list and rebuilds.
std::vector<Site> apply_site_edits(std::vector<Site> sites, std::span<const SiteEdit> edits);
VoronoiIndex update_sites(const VoronoiIndex& index, std::span<const SiteEdit> edits);

// Count of Voronoi constructions performed by this process (planar and
// network). Used to check that query maintenance never rebuilds.
std::uint64_t diagram_build_count();
void note_diagram_build();

}  // namespace insq::geo
