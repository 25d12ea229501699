#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "insq/geometry/polygon.hpp"
#include "insq/sim/scenario.hpp"
#include "insq/sim/simulation.hpp"

namespace insq::io {

inline constexpr int kFormatVersion = 1;

// Canonical JSON with sorted keys and a trailing newline. Saving the same
// scenario always yields the same bytes.
std::string save_scenario(const sim::Scenario& s);

// Parses and validates. Errors: kMalformed for unparsable text, kSchema for
// missing or mistyped fields and mode mismatches (field is a dotted path
// such as "k" or "graph.edges[2].u"), then everything validate_scenario
// reports.
sim::Scenario load_scenario(std::string_view text);

sim::Scenario read_scenario_file(const std::string& path);
void write_scenario_file(const std::string& path, const sim::Scenario& s);

struct GenerateParams {
  sim::Mode mode = sim::Mode::kPlane;
  std::size_t n = 100;  // sites
  int grid_width = 10;  // network mode
  int grid_height = 10;
  std::size_t k = 5;
  double rho = 1.6;
  std::uint64_t ticks = 1000;
  std::uint64_t seed = 0;
};

// Plane: n uniform sites in [0,100]^2 and a random polyline. Network: a
// grid with perturbed edge lengths, n sites on distinct vertices and a
// random walk. Speed is set so the trajectory ends on the last tick.
// n = 1 forces k = 1, rho = 1. Throws kTooFewSites ("k") when
// floor(rho * k) > n and kInvalidArgument for other bad parameters.
sim::Scenario generate_random(const GenerateParams& p);

// One tick as streamed to clients: t, pos, knn, ins, prefetch, valid,
// event, green_radius, red_radius (null when there is no influential
// neighbor), plus cell when given and network_pos in network mode.
nlohmann::json report_to_json(const sim::TickReport& r,
                              const std::optional<geo::Polygon>& cell = std::nullopt);

}  // namespace insq::io
