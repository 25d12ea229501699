#include "insq/engine/query.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "insq/error.hpp"

namespace insq::engine {

std::size_t QueryConfig::prefetch_size() const {
  // The slack keeps decimal ratios such as 1.6 * 5 from flooring to 7.
  return static_cast<std::size_t>(std::floor(rho * static_cast<double>(k) + 1e-9));
}

void QueryConfig::check(std::size_t site_count) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1", "k");
  if (!std::isfinite(rho) || rho < 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be a finite value >= 1", "rho");
  }
  if (prefetch_size() > site_count) {
    throw Error(ErrorCode::kTooFewSites,
                "floor(rho * k) = " + std::to_string(prefetch_size()) + " exceeds the " +
                    std::to_string(site_count) + " available sites",
                "k");
  }
}

std::string_view to_string(TickEvent e) {
  switch (e) {
    case TickEvent::kNone: return "none";
    case TickEvent::kRerank: return "rerank";
    case TickEvent::kSwap: return "swap";
    case TickEvent::kRecompute: return "recompute";
  }
  return "none";
}

std::vector<SiteId> sorted_ids(std::span<const SiteId> ids) {
  std::vector<SiteId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains_id(std::span<const SiteId> sorted, SiteId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

std::vector<SiteId> set_union(std::span<const SiteId> a, std::span<const SiteId> b) {
  std::vector<SiteId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<SiteId> set_difference(std::span<const SiteId> a, std::span<const SiteId> b) {
  std::vector<SiteId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace insq::engine
