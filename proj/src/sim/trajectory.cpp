#include "insq/sim/trajectory.hpp"

#include <cmath>

#include "insq/error.hpp"

namespace insq::sim {

double path_length(const std::vector<geo::Point>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += std::hypot(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
  }
  return total;
}

geo::Point plane_position(const std::vector<geo::Point>& path, double s) {
  if (path.empty()) throw Error(ErrorCode::kTrajectory, "empty trajectory", "trajectory");
  double start = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const geo::Point& a = path[i - 1];
    const geo::Point& b = path[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len > 0.0 && s < start + len) {
      const double t = std::max(0.0, s - start) / len;
      return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    }
    start += len;
  }
  return path.back();
}

double path_length(const net::Graph& g, const std::vector<net::VertexId>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += g.edge(*g.edge_between(path[i - 1], path[i])).length;
  }
  return total;
}

net::NetworkPosition network_position(const net::Graph& g, const std::vector<net::VertexId>& path,
                                      double s) {
  if (path.empty()) throw Error(ErrorCode::kTrajectory, "empty trajectory", "trajectory");
  if (path.size() == 1) return g.position_of(path.front());
  double start = 0.0;
  net::NetworkPosition last;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto id = g.edge_between(path[i - 1], path[i]);
    if (!id) {
      throw Error(ErrorCode::kTrajectory, "trajectory leaves the network", "trajectory");
    }
    const net::Edge& e = g.edge(*id);
    const bool forward = e.u == path[i - 1];
    if (s < start + e.length) {
      const double along = std::max(0.0, s - start);
      return {e.id, forward ? along : e.length - along};
    }
    start += e.length;
    last = {e.id, forward ? e.length : 0.0};
  }
  return last;
}

geo::Point position_at(const std::vector<geo::Point>& path, double speed, std::uint64_t t) {
  return plane_position(path, static_cast<double>(t) * speed);
}

net::NetworkPosition position_at(const net::Graph& g, const std::vector<net::VertexId>& path,
                                 double speed, std::uint64_t t) {
  return network_position(g, path, static_cast<double>(t) * speed);
}

std::uint64_t ticks_to_end(double length, double speed) {
  if (length <= 0.0) return 1;
  return static_cast<std::uint64_t>(std::ceil(length / speed - 1e-9)) + 1;
}

}  // namespace insq::sim
