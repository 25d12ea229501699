#include "insq/sim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>

#include "insq/error.hpp"
#include "insq/sim/trajectory.hpp"

namespace insq::sim {

namespace {

std::vector<SiteId> plane_knn(const std::vector<geo::Site>& sites, const geo::Point& q,
                              std::size_t k) {
  std::vector<std::pair<double, SiteId>> keyed;
  keyed.reserve(sites.size());
  for (const geo::Site& s : sites) {
    const double dx = q.x - s.pos.x;
    const double dy = q.y - s.pos.y;
    keyed.emplace_back(dx * dx + dy * dy, s.id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<SiteId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(keyed[i].second);
  return out;
}

// Adjacency-list Dijkstra over the raw scenario graph, seeded at both ends
// of the query's edge.
class FullGraph {
 public:
  explicit FullGraph(const net::Graph& g) : g_(g) {
    for (std::size_t i = 0; i < g.vertex_count(); ++i) slot_[g.vertices()[i].id] = i;
    adj_.resize(g.vertex_count());
    for (const net::Edge& e : g.edges()) {
      adj_[slot_[e.u]].emplace_back(slot_[e.v], e.length);
      adj_[slot_[e.v]].emplace_back(slot_[e.u], e.length);
    }
  }

  std::vector<SiteId> knn(const net::NetworkPosition& q, const std::vector<SiteId>& sites,
                          std::size_t k) const {
    const net::Edge& e = g_.edge(q.edge);
    std::vector<double> dist(adj_.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    const std::size_t a = slot_.at(e.u);
    const std::size_t b = slot_.at(e.v);
    dist[a] = q.offset;
    dist[b] = std::min(dist[b], e.length - q.offset);
    heap.emplace(dist[a], a);
    heap.emplace(dist[b], b);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (const auto& [w, len] : adj_[v]) {
        if (d + len < dist[w]) {
          dist[w] = d + len;
          heap.emplace(dist[w], w);
        }
      }
    }
    std::vector<std::pair<double, SiteId>> keyed;
    for (SiteId s : sites) keyed.emplace_back(dist[slot_.at(s)], s);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return x.second < y.second; });
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
      const double tol = 1e-9 * std::max(std::fabs(x.first), std::fabs(y.first));
      if (std::fabs(x.first - y.first) <= tol) return x.second < y.second;
      return x.first < y.first;
    });
    std::vector<SiteId> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(keyed[i].second);
    return out;
  }

 private:
  const net::Graph& g_;
  std::map<net::VertexId, std::size_t> slot_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

}  // namespace

std::vector<OracleTick> brute_force_oracle(const Scenario& scenario) {
  validate_scenario(scenario);
  std::vector<OracleTick> out;
  if (scenario.mode == Mode::kPlane) {
    const std::uint64_t n =
        scenario.ticks ? *scenario.ticks : ticks_to_end(path_length(scenario.path), scenario.speed);
    for (std::uint64_t t = 0; t < n; ++t) {
      const geo::Point q = position_at(scenario.path, scenario.speed, t);
      out.push_back({t, plane_knn(scenario.sites, q, scenario.k)});
    }
  } else {
    const net::Graph g = scenario_graph(scenario);
    const FullGraph full(g);
    const std::uint64_t n = scenario.ticks ? *scenario.ticks
                                           : ticks_to_end(path_length(g, scenario.network_path),
                                                          scenario.speed);
    for (std::uint64_t t = 0; t < n; ++t) {
      const net::NetworkPosition q = position_at(g, scenario.network_path, scenario.speed, t);
      out.push_back({t, full.knn(q, scenario.network_sites, scenario.k)});
    }
  }
  return out;
}

DiffReport compare_runs(const std::vector<TickReport>& engine,
                        const std::vector<OracleTick>& oracle) {
  if (engine.size() != oracle.size()) {
    throw Error(ErrorCode::kInvalidArgument, "engine and oracle runs differ in length");
  }
  DiffReport d;
  d.total_ticks = engine.size();
  std::vector<SiteId> previous;
  for (std::size_t i = 0; i < engine.size(); ++i) {
    if (engine[i].t != oracle[i].t) {
      throw Error(ErrorCode::kInvalidArgument, "engine and oracle tick numbers differ");
    }
    std::vector<SiteId> mine = engine[i].knn;
    std::vector<SiteId> truth = oracle[i].knn;
    std::sort(mine.begin(), mine.end());
    std::sort(truth.begin(), truth.end());
    if (mine != truth) d.mismatched_ticks.push_back(engine[i].t);
    if (i > 0 && truth != previous) ++d.oracle_changes;
    if (engine[i].event != engine::TickEvent::kNone) ++d.engine_events;
    if (engine[i].event == engine::TickEvent::kRecompute) ++d.recompute_events;
    if (!engine[i].valid) ++d.invalid_verdicts;
    previous = std::move(truth);
  }
  return d;
}

}  // namespace insq::sim
