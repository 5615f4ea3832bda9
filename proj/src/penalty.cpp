#include "ucld/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "ucld/constraints.hpp"

namespace ucld {

CostBreakdown objective_cost(const Schedule& s, const ProblemInstance& inst) {
  CostBreakdown c;
  const int hours = inst.n_hours();
  for (int i = 0; i < inst.n_thermal(); ++i) {
    const auto& p = inst.thermal[i];
    for (int t = 0; t < hours; ++t) {
      if (!s.u(i, t)) continue;
      c.fuel += p.fuel_cost(s.g(i, t));
      const bool was_on = t == 0 ? true : s.u(i, t - 1) != 0;
      if (!was_on) c.startup += p.startup_cost;
    }
  }
  return c;
}

EvaluationReport penalties(const RepairOutcome& out,
                           const PenaltySchedule& sched,
                           const ProblemInstance& inst) {
  EvaluationReport r;
  const CostBreakdown cost = objective_cost(out.schedule, inst);
  r.fuel_cost = cost.fuel;
  r.startup_cost = cost.startup;

  r.supply_residual_sum = out.supply_residual_sum();
  r.water_residual_sum = out.water_residual_sum();
  for (const auto& pair : check_spinning_reserve(out.schedule, inst)) {
    r.reserve_shortfall_sum += std::max(pair.s1, 0.0) + std::max(pair.s2, 0.0);
  }

  r.supply_coeff = sched.supply_coeff();
  r.water_coeff = sched.water_coeff();
  r.reserve_weight = sched.reserve_weight;

  r.supply_penalty = r.supply_coeff * r.supply_residual_sum;
  r.water_penalty = r.water_coeff * r.water_residual_sum;
  r.reserve_penalty = r.reserve_weight * r.reserve_shortfall_sum;
  r.total = r.cost() + r.penalty();
  r.penalty_at_caps = sched.supply_coeff_max * r.supply_residual_sum +
                      sched.water_coeff_max * r.water_residual_sum +
                      sched.reserve_weight * r.reserve_shortfall_sum;
  r.feasible = r.penalty_at_caps < kFeasiblePenalty;
  return r;
}

double total_under(const EvaluationReport& r, const PenaltySchedule& sched) {
  return r.cost() + sched.supply_coeff() * r.supply_residual_sum +
         sched.water_coeff() * r.water_residual_sum +
         sched.reserve_weight * r.reserve_shortfall_sum;
}

}  // namespace ucld
