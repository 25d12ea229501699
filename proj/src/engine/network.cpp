#include "insq/engine/network.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "insq/error.hpp"
#include "insq/network/shortest_path.hpp"

namespace insq::engine {

using net::NetworkDistanceKey;
using net::NetworkPosition;
using net::Subnetwork;

namespace {

// Distances from q to every vertex of a subnetwork.
class Probe {
 public:
  static std::optional<Probe> run(const Subnetwork& sub, const NetworkPosition& q,
                                  std::vector<net::VertexId>* visited = nullptr) {
    const auto local = sub.locate(q);
    if (!local) return std::nullopt;
    Probe p;
    p.sub_ = &sub;
    p.dist_ = net::distances_from(sub.graph, *local, visited);
    return p;
  }

  double distance(SiteId id) const {
    if (!sub_->graph.has_vertex(id)) return std::numeric_limits<double>::infinity();
    return dist_[sub_->graph.vertex_index(id)];
  }
  NetworkDistanceKey key(SiteId id) const { return {distance(id), id}; }

  SiteId nearest_of(std::span<const SiteId> ids) const {
    return *std::min_element(ids.begin(), ids.end(),
                             [&](SiteId a, SiteId b) { return key(a) < key(b); });
  }
  SiteId farthest_of(std::span<const SiteId> ids) const {
    return *std::max_element(ids.begin(), ids.end(),
                             [&](SiteId a, SiteId b) { return key(a) < key(b); });
  }
  std::vector<SiteId> ranked(std::span<const SiteId> ids) const {
    std::vector<SiteId> out(ids.begin(), ids.end());
    net::sort_by_key(out, [&](SiteId id) { return distance(id); });
    return out;
  }

 private:
  const Subnetwork* sub_ = nullptr;
  std::vector<double> dist_;
};

std::shared_ptr<const Subnetwork> cover(const net::Graph& g, const net::NetworkVoronoi& nv,
                                        std::span<const SiteId> ranked,
                                        std::span<const SiteId> ins) {
  const std::vector<SiteId> members = set_union(sorted_ids(ranked), ins);
  return std::make_shared<const Subnetwork>(net::restricted_subnetwork(g, nv, members));
}

void settle(NetQueryState& state, std::vector<SiteId> ranked, std::vector<SiteId> ins,
            std::shared_ptr<const Subnetwork> subnet) {
  state.prefetch = std::move(ranked);
  const auto k = static_cast<std::ptrdiff_t>(state.config.k);
  state.knn.assign(state.prefetch.begin(), state.prefetch.begin() + k);
  const std::vector<SiteId> rest =
      sorted_ids(std::span<const SiteId>(state.prefetch).subspan(state.config.k));
  state.prefetch_ins = std::move(ins);
  state.influential = set_union(state.prefetch_ins, rest);
  state.subnet = std::move(subnet);
}

}  // namespace

std::vector<SiteId> network_influential_neighbor_set(const net::NetworkVoronoi& nv,
                                                     std::span<const SiteId> subset) {
  if (subset.empty()) throw Error(ErrorCode::kInvalidArgument, "subset must be nonempty");
  return influential_neighbors(subset, [&](SiteId id) { return nv.neighbors(id); });
}

NetQueryState init_query_net(const net::Graph& g, const net::NetworkVoronoi& nv,
                             const NetworkPosition& q, const QueryConfig& config) {
  config.check(nv.size());
  g.check(q);
  NetQueryState state;
  state.config = config;
  std::vector<SiteId> ranked = net::nearest_sites(g, nv.sites(), q, config.prefetch_size());
  std::vector<SiteId> ins = network_influential_neighbor_set(nv, ranked);
  auto subnet = cover(g, nv, ranked, ins);
  settle(state, std::move(ranked), std::move(ins), std::move(subnet));
  state.subnet_builds = 1;
  state.metrics.full_recomputes = 1;
  return state;
}

ValidationResult validate_net(const NetQueryState& state, const NetworkPosition& q,
                              std::vector<net::VertexId>* visited) {
  ValidationResult r;
  if (state.knn.empty()) return r;
  const auto probe = Probe::run(*state.subnet, q, visited);
  if (!probe) {
    r.valid = false;
    return r;
  }

  NetworkDistanceKey worst = probe->key(state.knn.front());
  r.remove = state.knn.front();
  for (std::size_t i = 1; i < state.knn.size(); ++i) {
    const NetworkDistanceKey key = probe->key(state.knn[i]);
    ++r.comparisons;
    if (worst < key) {
      worst = key;
      r.remove = state.knn[i];
    }
  }
  if (state.influential.empty()) return r;

  NetworkDistanceKey best = probe->key(state.influential.front());
  r.candidate = state.influential.front();
  for (std::size_t i = 1; i < state.influential.size(); ++i) {
    const NetworkDistanceKey key = probe->key(state.influential[i]);
    ++r.comparisons;
    if (key < best) {
      best = key;
      r.candidate = state.influential[i];
    }
  }
  ++r.comparisons;
  r.valid = worst < best;
  return r;
}

std::pair<NetQueryState, TickEvent> apply_update_net(const net::Graph& g,
                                                     const net::NetworkVoronoi& nv,
                                                     const NetQueryState& state,
                                                     const NetworkPosition& q,
                                                     const ValidationResult& result) {
  NetQueryState next = state;
  TickEvent event = TickEvent::kRecompute;
  std::optional<SiteId> candidate = result.candidate;
  bool done = false;
  const auto probe = candidate ? Probe::run(*state.subnet, q) : std::nullopt;

  // Tier 1: the newcomer is already in R; re-rank R on the cached subnetwork.
  if (probe && contains_id(state.influential, *candidate) &&
      !contains_id(state.prefetch_ins, *candidate)) {
    std::vector<SiteId> ranked = probe->ranked(state.prefetch);
    const NetworkDistanceKey worst = probe->key(ranked[state.config.k - 1]);
    if (state.prefetch_ins.empty() ||
        worst < probe->key(probe->nearest_of(state.prefetch_ins))) {
      settle(next, std::move(ranked), state.prefetch_ins, state.subnet);
      event = TickEvent::kRerank;
      done = true;
    } else {
      candidate = probe->nearest_of(state.prefetch_ins);
    }
  }

  // Tier 2: swap the candidate in for R's farthest member, then verify on
  // the subnetwork of the new R and its influential neighbors.
  if (!done && probe && contains_id(state.prefetch_ins, *candidate)) {
    std::vector<SiteId> swapped = state.prefetch;
    const SiteId far = probe->farthest_of(swapped);
    std::replace(swapped.begin(), swapped.end(), far, *candidate);
    std::vector<SiteId> ins = network_influential_neighbor_set(nv, swapped);
    auto subnet = cover(g, nv, swapped, ins);
    ++next.subnet_builds;
    const auto fresh = Probe::run(*subnet, q);
    if (fresh) {
      std::vector<SiteId> ranked = fresh->ranked(swapped);
      const NetworkDistanceKey worst = fresh->key(ranked.back());
      if (ins.empty() || worst < fresh->key(fresh->nearest_of(ins))) {
        settle(next, std::move(ranked), std::move(ins), std::move(subnet));
        event = TickEvent::kSwap;
        done = true;
      }
    }
  }

  if (!done) {
    const Metrics kept = next.metrics;
    const std::uint64_t builds = next.subnet_builds;
    next = init_query_net(g, nv, q, state.config);
    next.metrics = kept;
    next.subnet_builds = builds + 1;
    event = TickEvent::kRecompute;
  }

  switch (event) {
    case TickEvent::kRerank: ++next.metrics.reranks; break;
    case TickEvent::kSwap: ++next.metrics.swaps; break;
    case TickEvent::kRecompute: ++next.metrics.full_recomputes; break;
    case TickEvent::kNone: break;
  }
  if (sorted_ids(next.knn) == sorted_ids(state.knn)) {
    ++next.metrics.false_alarms;
  } else {
    ++next.metrics.knn_changes;
  }
  return {std::move(next), event};
}

std::vector<double> subnet_distances(const NetQueryState& state, const NetworkPosition& q,
                                     std::span<const SiteId> ids) {
  const auto probe = Probe::run(*state.subnet, q);
  std::vector<double> out;
  out.reserve(ids.size());
  for (SiteId id : ids) {
    out.push_back(probe ? probe->distance(id) : std::numeric_limits<double>::infinity());
  }
  return out;
}

TickOutcome tick_net(const net::Graph& g, const net::NetworkVoronoi& nv, NetQueryState& state,
                     const NetworkPosition& q) {
  TickOutcome out;
  out.validation = validate_net(state, q);
  ++state.metrics.ticks;
  ++state.metrics.validations;
  if (!out.validation.valid) {
    auto [next, event] = apply_update_net(g, nv, state, q, out.validation);
    state = std::move(next);
    out.event = event;
  }
  return out;
}

}  // namespace insq::engine
