#include "insq/sim/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "insq/engine/euclidean.hpp"
#include "insq/engine/network.hpp"
#include "insq/error.hpp"
#include "insq/geometry/voronoi_index.hpp"
#include "insq/network/network_voronoi.hpp"
#include "insq/sim/trajectory.hpp"

namespace insq::sim {

struct Simulation::World {
  geo::VoronoiIndex index;
  engine::QueryState plane;
  net::Graph graph;
  net::NetworkVoronoi nv;
  engine::NetQueryState network;
};

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
  speed_ = scenario_.speed;
  rebuild();
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

const engine::Metrics& Simulation::metrics() const {
  return scenario_.mode == Mode::kPlane ? world_->plane.metrics : world_->network.metrics;
}

double Simulation::arc_length(std::uint64_t t) const {
  return base_length_ + static_cast<double>(t - base_tick_) * speed_;
}

bool Simulation::finished() const {
  if (scenario_.ticks) return next_tick_ >= *scenario_.ticks;
  const std::uint64_t last =
      base_tick_ + ticks_to_end(std::max(0.0, length_ - base_length_), speed_) - 1;
  return next_tick_ > last;
}

void Simulation::rebuild() {
  validate_scenario(scenario_);
  auto world = std::make_unique<World>();
  const std::uint64_t current = next_tick_ == 0 ? 0 : next_tick_ - 1;
  if (scenario_.mode == Mode::kPlane) {
    world->index = geo::build_voronoi(scenario_.sites);
    length_ = path_length(scenario_.path);
    world->plane = engine::init_query(world->index, plane_position(scenario_.path, arc_length(current)),
                                      scenario_.config());
  } else {
    world->graph = scenario_graph(scenario_);
    world->nv = net::build_network_voronoi(world->graph, scenario_.network_sites);
    length_ = path_length(world->graph, scenario_.network_path);
    world->network = engine::init_query_net(
        world->graph, world->nv,
        network_position(world->graph, scenario_.network_path, arc_length(current)),
        scenario_.config());
  }
  world_ = std::move(world);
}

void Simulation::replace_scenario(Scenario scenario) {
  const engine::Metrics kept = metrics();
  Scenario previous = std::move(scenario_);
  scenario_ = std::move(scenario);
  try {
    rebuild();
  } catch (...) {
    scenario_ = std::move(previous);
    throw;
  }
  engine::Metrics& now =
      scenario_.mode == Mode::kPlane ? world_->plane.metrics : world_->network.metrics;
  now = kept;
  ++now.full_recomputes;
}

void Simulation::set_speed(double speed) {
  if (!std::isfinite(speed) || speed <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "speed must be positive", "speed");
  }
  if (next_tick_ > 0) {
    base_length_ = arc_length(next_tick_ - 1);
    base_tick_ = next_tick_ - 1;
  }
  speed_ = speed;
}

TickReport Simulation::step() {
  if (finished()) throw Error(ErrorCode::kConflict, "simulation already finished");
  TickReport r;
  r.t = next_tick_;
  const double s = arc_length(next_tick_);
  engine::TickOutcome out;
  if (scenario_.mode == Mode::kPlane) {
    const geo::Point q = plane_position(scenario_.path, s);
    engine::QueryState& state = world_->plane;
    out = engine::tick(world_->index, state, q);
    r.point = q;
    r.knn = state.knn;
    r.is_set = state.influential;
    r.prefetch = state.prefetch;
    double green = 0.0;
    for (SiteId id : state.knn) {
      green = std::max(green, geo::squared_distance(q, world_->index.site(id).pos));
    }
    r.green_radius = std::sqrt(green);
    if (!state.influential.empty()) {
      double red = geo::squared_distance(q, world_->index.site(state.influential.front()).pos);
      for (SiteId id : state.influential) {
        red = std::min(red, geo::squared_distance(q, world_->index.site(id).pos));
      }
      r.red_radius = std::sqrt(red);
    }
  } else {
    const net::NetworkPosition q = network_position(world_->graph, scenario_.network_path, s);
    engine::NetQueryState& state = world_->network;
    out = engine::tick_net(world_->graph, world_->nv, state, q);
    r.point = world_->graph.point_at(q);
    r.network_pos = q;
    r.knn = state.knn;
    r.is_set = state.influential;
    r.prefetch = state.prefetch;
    const std::vector<double> green = engine::subnet_distances(state, q, state.knn);
    r.green_radius = *std::max_element(green.begin(), green.end());
    if (!state.influential.empty()) {
      const std::vector<double> red = engine::subnet_distances(state, q, state.influential);
      r.red_radius = *std::min_element(red.begin(), red.end());
    }
  }
  r.valid = out.validation.valid;
  r.event = out.event;
  r.comparisons = out.validation.comparisons;
  ++next_tick_;
  return r;
}

SimulationResult run_simulation(const Scenario& scenario) {
  Simulation sim(scenario);
  SimulationResult result;
  while (!sim.finished()) result.reports.push_back(sim.step());
  result.metrics = sim.metrics();
  return result;
}

geo::Polygon cell_polygon(const Scenario& scenario, const TickReport& report) {
  if (scenario.mode != Mode::kPlane) return {};
  geo::BBox box = scenario.bbox;
  auto grow = [&](const geo::Point& p) {
    box.x0 = std::min(box.x0, p.x);
    box.y0 = std::min(box.y0, p.y);
    box.x1 = std::max(box.x1, p.x);
    box.y1 = std::max(box.y1, p.y);
  };
  for (const geo::Site& s : scenario.sites) grow(s.pos);
  grow(report.point);
  return geo::order_k_cell_polygon(scenario.sites, report.knn, box);
}

void write_metrics_csv(std::ostream& out, const std::vector<TickReport>& reports) {
  out << "tick,event,knn_size,is_size,comparisons,recompute_count\n";
  std::uint64_t recomputes = 0;
  for (const TickReport& r : reports) {
    if (r.event == engine::TickEvent::kRecompute) ++recomputes;
    out << r.t << ',' << engine::to_string(r.event) << ',' << r.knn.size() << ','
        << r.is_set.size() << ',' << r.comparisons << ',' << recomputes << '\n';
  }
}

}  // namespace insq::sim
