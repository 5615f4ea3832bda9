#pragma once

#include <vector>

#include "ucld/encoding.hpp"
#include "ucld/model.hpp"

namespace ucld {

// Absolute feasibility tolerance on power and level quantities.
inline constexpr double kFeasTol = 1e-9;

// Per-family violation magnitudes. A schedule is feasible iff every field is
// zero within tolerance.
struct ViolationReport {
  double supply_demand = 0.0;
  double reserve_low = 0.0;
  double reserve_high = 0.0;
  double thermal_bounds = 0.0;
  double thermal_ramp = 0.0;
  double mdt = 0.0;
  double pump_bounds = 0.0;
  double pump_ramp_gen = 0.0;
  double pump_ramp_pump = 0.0;
  double water_capacity = 0.0;
  double water_terminal = 0.0;

  bool feasible(double tau = kFeasTol) const {
    return supply_demand <= tau && reserve_low <= tau && reserve_high <= tau &&
           thermal_bounds <= tau && thermal_ramp <= tau && mdt <= tau &&
           pump_bounds <= tau && pump_ramp_gen <= tau &&
           pump_ramp_pump <= tau && water_capacity <= tau &&
           water_terminal <= tau;
  }
};

// Balance residual per hour: supply minus net demand.
std::vector<double> check_supply_demand(const Schedule& s,
                                        const ProblemInstance& inst);

// Reserve slacks per hour. The constraint holds at t iff s1 <= 0 and s2 <= 0.
struct ReservePair {
  double s1 = 0.0;  // committed minimum capability above the low envelope
  double s2 = 0.0;  // high envelope above committed maximum capability
};
std::vector<ReservePair> check_spinning_reserve(const Schedule& s,
                                                const ProblemInstance& inst);

struct ThermalViolations {
  double bounds = 0.0;
  double ramp = 0.0;
  double mdt = 0.0;  // one unit per committed hour inside a short off-block
};
ThermalViolations check_thermal(const Schedule& s, const ProblemInstance& inst);

struct HydroViolations {
  double pump_bounds = 0.0;
  double ramp_gen = 0.0;
  double ramp_pump = 0.0;
  double capacity = 0.0;
  double terminal = 0.0;
};
HydroViolations check_hydro(const Schedule& s, const ProblemInstance& inst);

ViolationReport check_all(const Schedule& s, const ProblemInstance& inst);

}  // namespace ucld
