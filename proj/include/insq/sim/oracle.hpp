#pragma once

#include <cstdint>
#include <vector>

#include "insq/sim/scenario.hpp"
#include "insq/sim/simulation.hpp"

namespace insq::sim {

struct OracleTick {
  std::uint64_t t = 0;
  std::vector<SiteId> knn;  // ascending by key
};

// Brute-force kNN at every tick of the scenario's batch run: a full sort of
// all sites (plane) or a full-graph shortest-path search (network). Uses
// none of the engine or diagram code.
std::vector<OracleTick> brute_force_oracle(const Scenario& scenario);

struct DiffReport {
  std::uint64_t total_ticks = 0;
  std::vector<std::uint64_t> mismatched_ticks;  // knn sets differ
  std::uint64_t oracle_changes = 0;             // ticks where the true set changed
  std::uint64_t engine_events = 0;              // ticks with a non-none event
  std::uint64_t recompute_events = 0;
  std::uint64_t invalid_verdicts = 0;

  bool ok() const { return mismatched_ticks.empty(); }
};

// Throws kInvalidArgument when the runs differ in length or tick numbering.
DiffReport compare_runs(const std::vector<TickReport>& engine,
                        const std::vector<OracleTick>& oracle);

}  // namespace insq::sim
