#pragma once

#include <stdexcept>
#include <vector>

#include "ucld/encoding.hpp"
#include "ucld/model.hpp"

namespace ucld {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// The configured search budget would be exceeded.
struct OracleBudgetExceeded : OracleError {
  using OracleError::OracleError;
};
// No commitment/dispatch satisfies the hard constraints.
struct OracleInfeasible : OracleError {
  using OracleError::OracleError;
};

inline constexpr long kOracleDefaultBudget = 20'000'000;

struct DispatchResult {
  std::vector<double> g;  // one entry per plant in `plants`, 0 if uncommitted
  double cost = 0.0;      // fuel cost of the committed plants
};

// Minimum-fuel-cost split of `demand` across the committed plants subject to
// their output bounds, by equal-incremental-cost (lambda) bisection with
// active-set clamping. Plants with zero quadratic coefficient are dispatched
// greedily at their lambda crossing. Balance holds to 1e-8.
DispatchResult dispatch_qp(const std::vector<int>& committed, double demand,
                           const std::vector<ThermalPlant>& plants);

struct OracleResult {
  Schedule schedule;
  double cost = 0.0;
  long nodes = 0;  // search nodes expanded
};

// Exhaustive unit-commitment search: enumerates per-hour commitment masks
// satisfying minimum downtime, dispatches each hour with dispatch_qp, prunes
// hour-to-hour dispatch transitions that violate thermal ramps, and adds
// startup costs. Pumped-storage plants are left idle and spinning reserve is
// not enforced, matching the simplified-problem regime this oracle targets.
// horizon_hours <= 0 means the instance's full horizon.
OracleResult enumerate_uc(const ProblemInstance& inst, int horizon_hours = -1,
                          long budget = kOracleDefaultBudget);

// Exhaustive feasible-cost search on a grid: commitment patterns times
// thermal outputs discretized at grid_step, with the last pumped-storage
// plant's output derived from the balance equation and all other hydro
// outputs enumerated on the same grid. Every complete candidate is validated
// against the full constraint set before being admitted.
OracleResult brute_force_grid(const ProblemInstance& inst, int horizon_hours,
                              double grid_step,
                              long budget = kOracleDefaultBudget);

}  // namespace ucld
