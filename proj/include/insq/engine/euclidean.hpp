#pragma once

#include <span>
#include <vector>

#include "insq/engine/query.hpp"
#include "insq/geometry/voronoi_index.hpp"

namespace insq::engine {

// Live state of one moving query in the plane. A single session owns it;
// move it between threads freely but never share it mutably.
struct QueryState {
  QueryConfig config;
  std::vector<SiteId> prefetch;      // R, ordered by key at the last ranking
  std::vector<SiteId> knn;           // first k entries of R
  std::vector<SiteId> influential;   // IS = I(R) + (R \ knn), sorted
  std::vector<SiteId> prefetch_ins;  // I(R), sorted
  Metrics metrics;
};

// I(subset): Voronoi neighbors of the subset minus the subset. Adjacency
// lookups only. Throws kNotFound for unknown ids, kInvalidArgument for an
// empty subset.
std::vector<SiteId> influential_neighbor_set(const geo::VoronoiIndex& index,
                                             std::span<const SiteId> subset);

// Throws kTooFewSites when floor(rho * k) exceeds the number of sites.
QueryState init_query(const geo::VoronoiIndex& index, const geo::Point& q,
                      const QueryConfig& config);

// One pass over knn and IS. The verdict is "every kNN member is closer to q
// than every IS member" under DistanceKey ordering.
ValidationResult validate(const geo::VoronoiIndex& index, const QueryState& state,
                          const geo::Point& q);

// Repairs a state whose validation failed: re-rank inside R, then a single
// swap into R verified against I(R), then a full recomputation. Returns the
// repaired state and the tier that succeeded.
std::pair<QueryState, TickEvent> apply_update(const geo::VoronoiIndex& index,
                                              const QueryState& state, const geo::Point& q,
                                              const ValidationResult& result);

// Validate, and update when invalid. Mutates `state` in place.
TickOutcome tick(const geo::VoronoiIndex& index, QueryState& state, const geo::Point& q);

}  // namespace insq::engine
