#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "insq/geometry/point.hpp"

namespace insq::engine {

using geo::SiteId;

struct QueryConfig {
  std::size_t k = 1;
  double rho = 1.0;  // prefetch ratio

  // floor(rho * k), the size of the prefetch set R.
  std::size_t prefetch_size() const;

  // Throws kInvalidArgument for k < 1 or rho < 1 (or non-finite) and
  // kTooFewSites when floor(rho * k) exceeds site_count.
  void check(std::size_t site_count) const;
};

struct Metrics {
  std::uint64_t ticks = 0;
  std::uint64_t validations = 0;
  std::uint64_t false_alarms = 0;
  std::uint64_t swaps = 0;
  std::uint64_t reranks = 0;
  std::uint64_t full_recomputes = 0;  // includes the initial computation
  std::uint64_t knn_changes = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

enum class TickEvent { kNone, kRerank, kSwap, kRecompute };

std::string_view to_string(TickEvent e);

struct ValidationResult {
  bool valid = true;
  std::optional<SiteId> candidate;  // nearest influential-set member
  std::optional<SiteId> remove;     // farthest kNN member
  std::size_t comparisons = 0;      // key comparisons performed
};

struct TickOutcome {
  TickEvent event = TickEvent::kNone;
  ValidationResult validation;
};

// Sorted set helpers shared by both engines. Every id set in a query state
// is a sorted, duplicate-free vector.
std::vector<SiteId> sorted_ids(std::span<const SiteId> ids);
bool contains_id(std::span<const SiteId> sorted, SiteId id);
std::vector<SiteId> set_union(std::span<const SiteId> a, std::span<const SiteId> b);
std::vector<SiteId> set_difference(std::span<const SiteId> a, std::span<const SiteId> b);

// (union of neighbors(p) for p in subset) minus subset. `neighbors` maps a
// site id to a sorted span of neighbor ids.
template <typename NeighborFn>
std::vector<SiteId> influential_neighbors(std::span<const SiteId> subset, NeighborFn&& neighbors) {
  const std::vector<SiteId> members = sorted_ids(subset);
  std::vector<SiteId> out;
  for (SiteId p : members) {
    for (SiteId n : neighbors(p)) {
      if (!contains_id(members, n)) out.push_back(n);
    }
  }
  return sorted_ids(out);
}

}  // namespace insq::engine
