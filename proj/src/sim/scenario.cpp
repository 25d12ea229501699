#include "insq/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "insq/error.hpp"

namespace insq::sim {

std::string_view to_string(Mode m) { return m == Mode::kPlane ? "plane" : "network"; }

Mode mode_from_string(std::string_view s) {
  if (s == "plane") return Mode::kPlane;
  if (s == "network") return Mode::kNetwork;
  throw Error(ErrorCode::kSchema, "mode must be \"plane\" or \"network\"", "mode");
}

std::size_t Scenario::site_count() const {
  return mode == Mode::kPlane ? sites.size() : network_sites.size();
}

Scenario default_scenario(Mode mode) {
  Scenario s;
  s.mode = mode;
  s.k = 5;
  s.rho = mode == Mode::kPlane ? 1.6 : 1.0;
  return s;
}

namespace {

void check_plane_sites(const std::vector<geo::Site>& sites) {
  std::unordered_set<geo::SiteId> ids;
  std::set<std::pair<double, double>> spots;
  for (const geo::Site& site : sites) {
    if (site.id < 0) {
      throw Error(ErrorCode::kInvalidArgument, "site ids must be non-negative", "sites");
    }
    if (!geo::is_finite(site.pos)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "site " + std::to_string(site.id) + " has a non-finite coordinate", "sites");
    }
    if (!ids.insert(site.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate site id " + std::to_string(site.id),
                  "sites");
    }
    if (!spots.insert({site.pos.x, site.pos.y}).second) {
      throw Error(ErrorCode::kCoincidentSites,
                  "site " + std::to_string(site.id) + " coincides with another site", "sites");
    }
  }
}

void check_network_sites(const Scenario& s, const net::Graph& g) {
  std::unordered_set<net::VertexId> ids;
  for (net::VertexId v : s.network_sites) {
    if (!g.has_vertex(v)) {
      throw Error(ErrorCode::kNotFound, "site " + std::to_string(v) + " is not a vertex",
                  "sites");
    }
    if (!ids.insert(v).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate site " + std::to_string(v), "sites");
    }
  }
}

void check_network_path(const Scenario& s, const net::Graph& g) {
  if (s.network_path.empty()) {
    throw Error(ErrorCode::kTrajectory, "trajectory needs at least one vertex", "trajectory");
  }
  for (std::size_t i = 0; i < s.network_path.size(); ++i) {
    const net::VertexId v = s.network_path[i];
    if (!g.has_vertex(v)) {
      throw Error(ErrorCode::kTrajectory, "trajectory vertex " + std::to_string(v) + " is unknown",
                  "trajectory");
    }
    if (i > 0 && !g.edge_between(s.network_path[i - 1], v)) {
      throw Error(ErrorCode::kTrajectory,
                  "trajectory vertices " + std::to_string(s.network_path[i - 1]) + " and " +
                      std::to_string(v) + " do not share an edge",
                  "trajectory");
    }
  }
  if (g.edge_count() == 0) {
    throw Error(ErrorCode::kTrajectory, "trajectory needs a network with edges", "trajectory");
  }
}

}  // namespace

net::Graph scenario_graph(const Scenario& s) {
  try {
    return net::build_graph(s.vertices, s.edges);
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), "graph");
  }
}

void validate_scenario(const Scenario& s) {
  if (s.k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1", "k");
  if (!std::isfinite(s.rho) || s.rho < 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be a finite value >= 1", "rho");
  }
  if (!std::isfinite(s.speed) || s.speed <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "speed must be positive", "speed");
  }
  if (!std::isfinite(s.bbox.x0) || !std::isfinite(s.bbox.y0) || !std::isfinite(s.bbox.x1) ||
      !std::isfinite(s.bbox.y1) || s.bbox.degenerate()) {
    throw Error(ErrorCode::kInvalidArgument, "bbox must have positive extent", "bbox");
  }
  if (s.ticks && *s.ticks == 0) {
    throw Error(ErrorCode::kInvalidArgument, "ticks must be at least 1", "ticks");
  }
  if (s.mode == Mode::kPlane) {
    check_plane_sites(s.sites);
    if (s.path.empty()) {
      throw Error(ErrorCode::kTrajectory, "trajectory needs at least one point", "trajectory");
    }
    for (const geo::Point& p : s.path) {
      if (!geo::is_finite(p)) {
        throw Error(ErrorCode::kTrajectory, "trajectory point is not finite", "trajectory");
      }
    }
  } else {
    const net::Graph g = scenario_graph(s);
    check_network_sites(s, g);
    check_network_path(s, g);
  }
  s.config().check(s.site_count());
}

}  // namespace insq::sim
