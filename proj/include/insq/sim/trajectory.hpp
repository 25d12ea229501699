#pragma once

#include <cstdint>
#include <vector>

#include "insq/geometry/point.hpp"
#include "insq/network/graph.hpp"

namespace insq::sim {

// Positions at arc length s along a trajectory. Segments are half-open:
// a point exactly at a joint belongs to the following segment. Past the
// end the position clamps to the final point.
double path_length(const std::vector<geo::Point>& path);
geo::Point plane_position(const std::vector<geo::Point>& path, double s);

double path_length(const net::Graph& g, const std::vector<net::VertexId>& path);
// A single-vertex path maps to that vertex on one of its edges.
net::NetworkPosition network_position(const net::Graph& g, const std::vector<net::VertexId>& path,
                                      double s);

// Tick t covers arc length t * speed.
geo::Point position_at(const std::vector<geo::Point>& path, double speed, std::uint64_t t);
net::NetworkPosition position_at(const net::Graph& g, const std::vector<net::VertexId>& path,
                                 double speed, std::uint64_t t);

// Ticks needed to reach the end, including tick 0.
std::uint64_t ticks_to_end(double length, double speed);

}  // namespace insq::sim
