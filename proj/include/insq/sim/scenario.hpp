#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "insq/engine/query.hpp"
#include "insq/geometry/point.hpp"
#include "insq/network/graph.hpp"

namespace insq::sim {

enum class Mode { kPlane, kNetwork };

std::string_view to_string(Mode m);
// Throws kSchema (field "mode") for anything but "plane" or "network".
Mode mode_from_string(std::string_view s);

// Everything needed to replay one moving query. Plane scenarios use
// `sites` and `path`; network scenarios use `vertices`, `edges`,
// `network_sites` and `network_path`.
struct Scenario {
  Mode mode = Mode::kPlane;
  std::size_t k = 5;
  double rho = 1.6;
  double speed = 1.0;  // distance per tick
  geo::BBox bbox{0.0, 0.0, 100.0, 100.0};
  std::vector<geo::Site> sites;
  std::vector<net::Vertex> vertices;
  std::vector<net::EdgeSpec> edges;
  std::vector<net::VertexId> network_sites;
  std::vector<geo::Point> path;
  std::vector<net::VertexId> network_path;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> ticks;  // run length; default is path end

  engine::QueryConfig config() const { return {k, rho}; }
  std::size_t site_count() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Demo defaults: plane k=5, rho=1.6; network k=5, rho=1.
Scenario default_scenario(Mode mode);

// Full validity check for a runnable scenario. Throws Error with the
// offending field name: kInvalidArgument / kTooFewSites ("k"),
// kInvalidArgument ("rho", "speed", "bbox", "sites", "ticks"),
// kDuplicateId / kCoincidentSites ("sites"), graph errors ("graph"),
// kTrajectory ("trajectory").
void validate_scenario(const Scenario& s);

// Builds the scenario's road network. Errors carry field "graph".
net::Graph scenario_graph(const Scenario& s);

}  // namespace insq::sim
