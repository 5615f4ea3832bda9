#pragma once

#include "ucld/model.hpp"
#include "ucld/repair.hpp"

namespace ucld {

// Scheduled penalty coefficients. Both coefficients start at zero, grow by
// `step` per generation and saturate at their maxima; the spinning-reserve
// weight is constant.
struct PenaltySchedule {
  double supply_coeff_max = 1000.0;
  double water_coeff_max = 100.0;
  double step = 0.025;
  double reserve_weight = 1.0;
  long generation = 0;

  double supply_coeff() const {
    return std::min(step * static_cast<double>(generation), supply_coeff_max);
  }
  double water_coeff() const {
    return std::min(step * static_cast<double>(generation), water_coeff_max);
  }
  void advance() { ++generation; }
};

struct CostBreakdown {
  double fuel = 0.0;
  double startup = 0.0;
};

// Fuel and startup cost of a schedule. Startup is charged at each off-to-on
// transition; the pre-horizon state is "all plants on", so hour 0 never
// incurs startup cost.
CostBreakdown objective_cost(const Schedule& s, const ProblemInstance& inst);

struct EvaluationReport {
  double fuel_cost = 0.0;
  double startup_cost = 0.0;
  // Raw violation magnitudes, independent of the penalty coefficients.
  double supply_residual_sum = 0.0;
  double water_residual_sum = 0.0;
  double reserve_shortfall_sum = 0.0;
  // Coefficients in effect when the report was produced.
  double supply_coeff = 0.0;
  double water_coeff = 0.0;
  double reserve_weight = 1.0;

  double supply_penalty = 0.0;
  double water_penalty = 0.0;
  double reserve_penalty = 0.0;
  double total = 0.0;
  // Penalty the same violations would incur at the coefficient caps. Early
  // in a run the ramped coefficients are near zero and would declare any
  // schedule penalty-free; feasibility is therefore judged at the caps,
  // making the flag independent of the generation counter.
  double penalty_at_caps = 0.0;
  bool feasible = false;  // penalty_at_caps < kFeasiblePenalty

  double cost() const { return fuel_cost + startup_cost; }
  double penalty() const {
    return supply_penalty + water_penalty + reserve_penalty;
  }
};

// Feasibility threshold on the total penalty.
inline constexpr double kFeasiblePenalty = 0.01;

// Assembles the scalar objective from a repair outcome under the given
// penalty snapshot.
EvaluationReport penalties(const RepairOutcome& out,
                           const PenaltySchedule& sched,
                           const ProblemInstance& inst);

// Total of an already-assembled report under a different snapshot. Used to
// re-score incumbents so that selection always compares totals taken under
// the same coefficients.
double total_under(const EvaluationReport& r, const PenaltySchedule& sched);

}  // namespace ucld
