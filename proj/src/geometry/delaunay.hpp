#pragma once

#include <span>
#include <vector>

#include "insq/geometry/point.hpp"

namespace insq::geo::detail {

// Voronoi-neighbor adjacency of a set of distinct points, by index.
// Two points are neighbors iff their Voronoi cells share a boundary
// segment of positive length; cells that meet at a single point are not
// neighbors. Each inner list is sorted ascending.
std::vector<std::vector<int>> voronoi_adjacency(std::span<const Point> points);

}  // namespace insq::geo::detail
