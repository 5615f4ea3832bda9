#pragma once

#include <vector>

#include "ucld/encoding.hpp"
#include "ucld/model.hpp"

namespace ucld {

struct RepairOptions {
  int max_adjustments = 10;  // passes per hour in the supply-demand repair
};

// Result of the full repair pipeline. The residual fields are exactly the
// quantities fed to the penalty terms and reflect the returned schedule.
struct RepairOutcome {
  Schedule schedule;
  std::vector<double> supply_residual;  // per-hour unresolved balance gap
  std::vector<double> water_residual;   // per-plant |hv_Tf - hv_0| left over

  double supply_residual_sum() const;
  double water_residual_sum() const;
};

// Stages 1-8, in order: thermal ramp clamp, thermal bound clamp, minimum
// downtime repair, pump-storage generation/pumping bound clamps, pump-storage
// ramp clamps, water-capacity repair. Sweeps run in ascending t.
Schedule repair_stage_chain(Schedule s, const ProblemInstance& inst);

// Supply-demand balance repair. For each hour, committed thermal plants are
// visited in preference order, each adjusted toward closing the gap by at
// most max_change(c) per visit within bound and backward-ramp slack. The
// thermal ramp clamp is re-applied afterwards; the returned residual series
// reflects the returned schedule.
std::vector<double> repair_supply_demand(Schedule& s, const Chromosome& c,
                                         const ProblemInstance& inst,
                                         const RepairOptions& opts = {});

// Terminal water-level repair: per plant, sweep t from t_final down to 1
// moving hg toward closing hv_Tf - hv_0, respecting output bounds, the
// one-sided pump ramps against both neighbours, and reservoir capacity over
// all subsequent hours. Returns the per-plant leftover gap.
std::vector<double> repair_water_terminal(Schedule& s,
                                          const ProblemInstance& inst);

// decode -> stage chain -> supply-demand repair -> water-terminal repair.
// Balance shifts introduced by the water repair are folded into the supply
// residual series, which is recomputed from the final schedule.
RepairOutcome full_repair(const Chromosome& c, const ProblemInstance& inst,
                          const RepairOptions& opts = {});

}  // namespace ucld
