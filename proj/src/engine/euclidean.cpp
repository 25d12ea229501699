#include "insq/engine/euclidean.hpp"

#include <algorithm>

#include "insq/error.hpp"

namespace insq::engine {

using geo::DistanceKey;
using geo::Point;
using geo::VoronoiIndex;

namespace {

std::vector<SiteId> rank_by_key(const VoronoiIndex& index, std::span<const SiteId> ids,
                                const Point& q) {
  std::vector<std::pair<DistanceKey, SiteId>> keyed;
  keyed.reserve(ids.size());
  for (SiteId id : ids) keyed.emplace_back(geo::distance_key(q, index.site(id)), id);
  std::sort(keyed.begin(), keyed.end());
  std::vector<SiteId> out;
  out.reserve(keyed.size());
  for (const auto& [key, id] : keyed) out.push_back(id);
  return out;
}

// Fills knn / influential from an R already ranked by key at q.
void settle(QueryState& state, std::vector<SiteId> ranked, std::vector<SiteId> ins_of_ranked) {
  state.prefetch = std::move(ranked);
  const auto k = static_cast<std::ptrdiff_t>(state.config.k);
  state.knn.assign(state.prefetch.begin(), state.prefetch.begin() + k);
  const std::vector<SiteId> rest = sorted_ids(
      std::span<const SiteId>(state.prefetch).subspan(state.config.k));
  state.prefetch_ins = std::move(ins_of_ranked);
  state.influential = set_union(state.prefetch_ins, rest);
}

bool same_set(std::span<const SiteId> a, std::span<const SiteId> b) {
  return sorted_ids(a) == sorted_ids(b);
}

}  // namespace

std::vector<SiteId> influential_neighbor_set(const VoronoiIndex& index,
                                             std::span<const SiteId> subset) {
  if (subset.empty()) throw Error(ErrorCode::kInvalidArgument, "subset must be nonempty");
  return influential_neighbors(subset, [&](SiteId id) { return index.neighbors(id); });
}

QueryState init_query(const VoronoiIndex& index, const Point& q, const QueryConfig& config) {
  config.check(index.size());
  if (!geo::is_finite(q)) throw Error(ErrorCode::kInvalidArgument, "query point is not finite");
  QueryState state;
  state.config = config;
  std::vector<SiteId> ranked = knn_search(index, q, config.prefetch_size());
  std::vector<SiteId> ins = influential_neighbor_set(index, ranked);
  settle(state, std::move(ranked), std::move(ins));
  state.metrics.full_recomputes = 1;
  return state;
}

ValidationResult validate(const VoronoiIndex& index, const QueryState& state, const Point& q) {
  ValidationResult r;
  if (state.knn.empty()) return r;

  DistanceKey worst = geo::distance_key(q, index.site(state.knn.front()));
  r.remove = state.knn.front();
  for (std::size_t i = 1; i < state.knn.size(); ++i) {
    const DistanceKey key = geo::distance_key(q, index.site(state.knn[i]));
    ++r.comparisons;
    if (worst < key) {
      worst = key;
      r.remove = state.knn[i];
    }
  }
  if (state.influential.empty()) return r;

  DistanceKey best = geo::distance_key(q, index.site(state.influential.front()));
  r.candidate = state.influential.front();
  for (std::size_t i = 1; i < state.influential.size(); ++i) {
    const DistanceKey key = geo::distance_key(q, index.site(state.influential[i]));
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

std::pair<QueryState, TickEvent> apply_update(const VoronoiIndex& index, const QueryState& state,
                                              const Point& q, const ValidationResult& result) {
  auto key = [&](SiteId id) { return geo::distance_key(q, index.site(id)); };
  const auto nearest_of = [&](std::span<const SiteId> ids) {
    return *std::min_element(ids.begin(), ids.end(),
                             [&](SiteId a, SiteId b) { return key(a) < key(b); });
  };
  const auto farthest_of = [&](std::span<const SiteId> ids) {
    return *std::max_element(ids.begin(), ids.end(),
                             [&](SiteId a, SiteId b) { return key(a) < key(b); });
  };

  QueryState next = state;
  TickEvent event = TickEvent::kRecompute;
  std::optional<SiteId> candidate = result.candidate;
  bool done = false;

  // Tier 1: the newcomer is already prefetched; re-rank R.
  if (candidate && contains_id(state.influential, *candidate) &&
      !contains_id(state.prefetch_ins, *candidate)) {
    std::vector<SiteId> ranked = rank_by_key(index, state.prefetch, q);
    const DistanceKey worst = key(ranked[state.config.k - 1]);
    if (state.prefetch_ins.empty() || worst < key(nearest_of(state.prefetch_ins))) {
      settle(next, std::move(ranked), state.prefetch_ins);
      event = TickEvent::kRerank;
      done = true;
    } else {
      // A member of I(R) overtook the new k-th object; try to swap it in.
      candidate = nearest_of(state.prefetch_ins);
    }
  }

  // Tier 2: swap the candidate into R for R's farthest member and verify
  // the result against its own influential neighbors.
  if (!done && candidate && contains_id(state.prefetch_ins, *candidate)) {
    std::vector<SiteId> swapped = state.prefetch;
    const SiteId far = farthest_of(swapped);
    std::replace(swapped.begin(), swapped.end(), far, *candidate);
    std::vector<SiteId> ins = influential_neighbor_set(index, swapped);
    const DistanceKey worst = key(farthest_of(swapped));
    if (ins.empty() || worst < key(nearest_of(ins))) {
      settle(next, rank_by_key(index, swapped, q), std::move(ins));
      event = TickEvent::kSwap;
      done = true;
    }
  }

  if (!done) {
    const Metrics kept = next.metrics;
    next = init_query(index, q, state.config);
    next.metrics = kept;
    event = TickEvent::kRecompute;
  }

  switch (event) {
    case TickEvent::kRerank: ++next.metrics.reranks; break;
    case TickEvent::kSwap: ++next.metrics.swaps; break;
    case TickEvent::kRecompute: ++next.metrics.full_recomputes; break;
    case TickEvent::kNone: break;
  }
  if (same_set(next.knn, state.knn)) {
    ++next.metrics.false_alarms;
  } else {
    ++next.metrics.knn_changes;
  }
  return {std::move(next), event};
}

TickOutcome tick(const VoronoiIndex& index, QueryState& state, const Point& q) {
  TickOutcome out;
  out.validation = validate(index, state, q);
  ++state.metrics.ticks;
  ++state.metrics.validations;
  if (!out.validation.valid) {
    auto [next, event] = apply_update(index, state, q, out.validation);
    state = std::move(next);
    out.event = event;
  }
  return out;
}

}  // namespace insq::engine
