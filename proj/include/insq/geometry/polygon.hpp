#pragma once

#include <span>
#include <vector>

#include "insq/geometry/point.hpp"
#include "insq/geometry/voronoi_index.hpp"

namespace insq::geo {

// Closed ring, counterclockwise, first vertex not repeated. Empty when the
// region is empty.
struct Polygon {
  std::vector<Point> vertices;

  bool empty() const { return vertices.size() < 3; }
  double area() const;
  // Point-in-polygon for a convex ring, boundary inclusive.
  bool contains(const Point& p) const;
};

Polygon box_polygon(const BBox& box);

// Keeps the part of `poly` closer to `near` than to `far` (the closed
// half-plane bounded by their bisector). `poly` must be convex.
Polygon clip_to_bisector(const Polygon& poly, const Point& near, const Point& far);

// Order-1 cell of `id` clipped to `box`. Throws kNotFound for unknown ids
// and kInvalidArgument for a degenerate box.
Polygon voronoi_cell_polygon(const VoronoiIndex& index, SiteId id, const BBox& box);

// Region of points whose nearest-|subset| set is exactly `subset`, clipped
// to `box`. Intersects one half-plane per (member, non-member) pair, so the
// cost is |subset| * (|sites| - |subset|) clips. Display and test use only.
Polygon order_k_cell_polygon(std::span<const Site> sites, std::span<const SiteId> subset,
                             const BBox& box);

}  // namespace insq::geo
