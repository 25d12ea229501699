#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "insq/engine/query.hpp"
#include "insq/geometry/polygon.hpp"
#include "insq/network/graph.hpp"
#include "insq/sim/scenario.hpp"

namespace insq::sim {

using engine::SiteId;

// Engine output for one tick, taken after any update.
struct TickReport {
  std::uint64_t t = 0;
  geo::Point point;                                // query location in the plane
  std::optional<net::NetworkPosition> network_pos;  // network mode only
  std::vector<SiteId> knn;                         // ascending by key
  std::vector<SiteId> is_set;                      // sorted
  std::vector<SiteId> prefetch;                    // R, by key at the last ranking
  bool valid = true;                               // verdict before the update
  engine::TickEvent event = engine::TickEvent::kNone;
  double green_radius = 0.0;                // distance to the farthest knn member
  std::optional<double> red_radius;         // distance to the nearest is_set member
  std::size_t comparisons = 0;

  friend bool operator==(const TickReport&, const TickReport&) = default;
};

// Tick-by-tick playback of one scenario. The diagram is built once at
// construction; the query is initialized at the tick-0 position. Owned by
// a single thread at a time.
class Simulation {
 public:
  // Validates the scenario (see validate_scenario).
  explicit Simulation(Scenario scenario);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  const Scenario& scenario() const { return scenario_; }
  std::uint64_t next_tick() const { return next_tick_; }
  bool finished() const;
  double speed() const { return speed_; }
  const engine::Metrics& metrics() const;

  // Advances one tick. Throws kConflict once finished.
  TickReport step();

  // Distance per tick from the next tick on. Throws kInvalidArgument for a
  // nonpositive or non-finite speed.
  void set_speed(double speed);

  // Swaps in an edited scenario: rebuilds the diagram and recomputes the
  // query at the current position, keeping tick progress and counters.
  void replace_scenario(Scenario scenario);

 private:
  struct World;

  double arc_length(std::uint64_t t) const;
  void rebuild();

  Scenario scenario_;
  std::unique_ptr<World> world_;
  double speed_ = 1.0;
  double base_length_ = 0.0;  // arc length at base_tick_
  std::uint64_t base_tick_ = 0;
  std::uint64_t next_tick_ = 0;
  double length_ = 0.0;
};

struct SimulationResult {
  std::vector<TickReport> reports;
  engine::Metrics metrics;
};

SimulationResult run_simulation(const Scenario& scenario);

// Order-k cell of a plane report's knn set, clipped to the scenario box
// grown to cover every site and the query. Empty in network mode.
geo::Polygon cell_polygon(const Scenario& scenario, const TickReport& report);

// Columns: tick,event,knn_size,is_size,comparisons,recompute_count. The
// last column is the running count of recompute events.
void write_metrics_csv(std::ostream& out, const std::vector<TickReport>& reports);

}  // namespace insq::sim
