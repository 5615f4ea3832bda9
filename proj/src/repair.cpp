#include "ucld/repair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ucld/constraints.hpp"

namespace ucld {

namespace {

constexpr double kZero = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

// Stage 1. Committed hours are clamped into the ramp window around the
// previous hour's output; off hours stay at zero.
void clamp_thermal_ramps(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int i = 0; i < inst.n_thermal(); ++i) {
    const auto& p = inst.thermal[i];
    for (int t = 1; t < hours; ++t) {
      if (!s.u(i, t)) continue;
      const double prev = s.g(i, t - 1);
      s.g(i, t) = clamp(s.g(i, t), prev - p.ramp_down, prev + p.ramp_up);
    }
  }
}

// Stage 2.
void clamp_thermal_bounds(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int i = 0; i < inst.n_thermal(); ++i) {
    const auto& p = inst.thermal[i];
    for (int t = 0; t < hours; ++t) {
      if (s.u(i, t)) s.g(i, t) = clamp(s.g(i, t), p.g_min, p.g_max);
    }
  }
}

// Stage 3. An on-hour following an off-run shorter than the minimum downtime
// is forced off, extending the run until it is long enough.
void repair_mdt(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int i = 0; i < inst.n_thermal(); ++i) {
    const int mdt = inst.thermal[i].mdt;
    int off_run = 0;  // pre-horizon state: plant on
    for (int t = 0; t < hours; ++t) {
      if (!s.u(i, t)) {
        ++off_run;
        continue;
      }
      if (off_run > 0 && off_run < mdt) {
        s.u(i, t) = 0;
        s.g(i, t) = 0.0;
        ++off_run;
      } else {
        off_run = 0;
      }
    }
  }
}

// Stages 4-5.
void clamp_pump_bounds(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int j = 0; j < inst.n_hydro(); ++j) {
    const auto& p = inst.hydro[j];
    for (int t = 0; t < hours; ++t) {
      const double hg = s.hg(j, t);
      if (hg > 0.0) {
        s.hg(j, t) = clamp(hg, p.hg_min, p.hg_max);
      } else if (hg < 0.0) {
        s.hg(j, t) = -clamp(-hg, p.hp_min, p.hp_max);
      }
    }
  }
}

// Stages 6-7. The ramps are one-sided: generation may not rise faster than
// ramp_gen_up, pumping draw may not rise faster than ramp_pump_down. The
// pre-horizon state is hg = 0.
void clamp_pump_ramps(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int j = 0; j < inst.n_hydro(); ++j) {
    const auto& p = inst.hydro[j];
    for (int t = 0; t < hours; ++t) {
      const double prev = t > 0 ? s.hg(j, t - 1) : 0.0;
      const double hg = s.hg(j, t);
      if (hg > 0.0 && hg - prev > p.ramp_gen_up) {
        s.hg(j, t) = prev + p.ramp_gen_up;
      } else if (hg < 0.0 && prev - hg > p.ramp_pump_down) {
        s.hg(j, t) = prev - p.ramp_pump_down;
      }
    }
  }
}

// Stage 8. Flows are shrunk toward zero just enough to keep the reservoir
// inside its capacity; a shrunk flow that would land inside the forbidden
// minimum-output band snaps to zero, which also keeps the level in range.
void repair_water_capacity(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int j = 0; j < inst.n_hydro(); ++j) {
    const auto& p = inst.hydro[j];
    s.hv(j, 0) = p.hv_initial;
    for (int t = 1; t < hours; ++t) {
      const double prev_level = s.hv(j, t - 1);
      double hg = s.hg(j, t);
      const double level = prev_level + p.level_delta(hg);
      if (level > p.hv_max) {
        hg = -(p.hv_max - prev_level) * p.epsilon / p.eta;
        if (hg > -p.hp_min) hg = 0.0;
      } else if (level < p.hv_min) {
        hg = (prev_level - p.hv_min) * p.epsilon / p.eta;
        if (hg < p.hg_min) hg = 0.0;
      }
      s.hg(j, t) = hg;
      s.hv(j, t) = prev_level + p.level_delta(hg);
    }
  }
}

// Largest admissible move of one hour's pump-storage output from x toward
// `target` (never past it). The admissible values are {0}, the generation
// band [hg_min, hg_max] and the pumping band [-hp_max, -hp_min]; the
// one-sided ramp pairs against the (current) predecessor output `prev` and,
// when present, the already-final successor output `succ` are respected.
// Returns x when no move in that direction is admissible.
double move_output(double x, double target, const PumpedStoragePlant& p,
                   double prev, bool has_succ, double succ) {
  if (target > x) {
    double ub = target;
    // A pumping successor caps how far above it this hour may sit.
    if (has_succ && succ < 0.0) ub = std::min(ub, succ + p.ramp_pump_down);
    // Best generation point: band top, predecessor gen-ramp, ub.
    const double y_gen = std::min({ub, p.hg_max, prev + p.ramp_gen_up});
    if (y_gen > 0.0 && y_gen >= p.hg_min && y_gen > x) return y_gen;
    if (x < 0.0) {
      if (ub >= 0.0) return 0.0;
      // Stay within the pumping band.
      const double y_pump = std::min(ub, -p.hp_min);
      if (y_pump > x) return y_pump;
    }
    return x;
  }
  if (target < x) {
    double lb = target;
    // A generating successor caps how far below it this hour may sit.
    if (has_succ && succ > 0.0) lb = std::max(lb, succ - p.ramp_gen_up);
    // Best pumping point: band bottom, predecessor pump-ramp, lb.
    const double y_pump = std::max({lb, -p.hp_max, prev - p.ramp_pump_down});
    if (y_pump < 0.0 && y_pump <= -p.hp_min && y_pump < x) return y_pump;
    if (x > 0.0) {
      if (lb <= 0.0) return 0.0;
      // Stay within the generation band.
      const double y_gen = std::max(lb, p.hg_min);
      if (y_gen < x) return y_gen;
    }
    return x;
  }
  return x;
}

}  // namespace

double RepairOutcome::supply_residual_sum() const {
  double sum = 0.0;
  for (double r : supply_residual) sum += std::fabs(r);
  return sum;
}

double RepairOutcome::water_residual_sum() const {
  return std::accumulate(water_residual.begin(), water_residual.end(), 0.0);
}

Schedule repair_stage_chain(Schedule s, const ProblemInstance& inst) {
  clamp_thermal_ramps(s, inst);
  clamp_thermal_bounds(s, inst);
  repair_mdt(s, inst);
  clamp_pump_bounds(s, inst);
  clamp_pump_ramps(s, inst);
  repair_water_capacity(s, inst);
  return s;
}

std::vector<double> repair_supply_demand(Schedule& s, const Chromosome& c,
                                         const ProblemInstance& inst,
                                         const RepairOptions& opts) {
  const int hours = inst.n_hours();
  const std::vector<int> order = repair_order(c);
  const double maxc = static_cast<double>(max_change(c));

  for (int t = 0; t < hours; ++t) {
    double supply = 0.0;
    for (int i = 0; i < inst.n_thermal(); ++i) {
      if (s.u(i, t)) supply += s.g(i, t);
    }
    for (int j = 0; j < inst.n_hydro(); ++j) supply += s.hg(j, t);
    double diff = supply - inst.demand.net_demand[t];

    for (int pass = 0; pass < opts.max_adjustments && std::fabs(diff) > kZero;
         ++pass) {
      for (int i : order) {
        if (std::fabs(diff) <= kZero) break;
        if (!s.u(i, t)) continue;
        const auto& p = inst.thermal[i];
        const double g = s.g(i, t);
        if (diff < 0.0) {
          // Undersupply: raise output within bound and backward-ramp slack.
          const double ramp_room =
              t > 0 ? (s.g(i, t - 1) + p.ramp_up) - g : kInf;
          const double step = std::min({-diff, maxc, p.g_max - g, ramp_room});
          if (step > 0.0) {
            s.g(i, t) = g + step;
            diff += step;
          }
        } else {
          const double ramp_room =
              t > 0 ? g - (s.g(i, t - 1) - p.ramp_down) : kInf;
          const double step = std::min({diff, maxc, g - p.g_min, ramp_room});
          if (step > 0.0) {
            s.g(i, t) = g - step;
            diff -= step;
          }
        }
      }
    }
  }

  // Adjustments respect only the backward ramp, so forward pairs may have
  // opened up; one more ramp sweep restores them.
  clamp_thermal_ramps(s, inst);
  return check_supply_demand(s, inst);
}

std::vector<double> repair_water_terminal(Schedule& s,
                                          const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  const int t_final = hours - 1;
  std::vector<double> residual(inst.n_hydro(), 0.0);

  for (int j = 0; j < inst.n_hydro(); ++j) {
    const auto& p = inst.hydro[j];
    double gap = s.hv(j, t_final) - s.hv(j, 0);
    // Room between the level trajectory and the reservoir limits over the
    // suffix [t, t_final], grown as the sweep walks backwards.
    double floor_room = kInf;
    double ceil_room = kInf;

    for (int t = t_final; t >= 1; --t) {
      floor_room = std::min(floor_room, s.hv(j, t) - p.hv_min);
      ceil_room = std::min(ceil_room, p.hv_max - s.hv(j, t));
      if (std::fabs(gap) <= kZero) break;

      const double x = s.hg(j, t);
      const bool has_succ = t < t_final;
      const double succ = has_succ ? s.hg(j, t + 1) : 0.0;
      const double prev = s.hg(j, t - 1);

      double target = x;
      if (gap > 0.0) {
        // Ended high: lower the suffix levels by raising output, limited by
        // the remaining gap and the suffix floor room.
        target = x + std::max(std::min(gap, floor_room), 0.0) * p.epsilon / p.eta;
      } else {
        // Ended low: raise the suffix levels by lowering output toward
        // pumping, limited by the gap and the suffix ceiling room.
        target = x - std::max(std::min(-gap, ceil_room), 0.0) * p.epsilon / p.eta;
      }

      const double y = move_output(x, target, p, prev, has_succ, succ);
      if (y != x) {
        s.hg(j, t) = y;
        const double shift = p.level_delta(y) - p.level_delta(x);
        for (int tau = t; tau < hours; ++tau) s.hv(j, tau) += shift;
        floor_room += shift;
        ceil_room -= shift;
        gap += shift;
      }
    }

    // Re-roll the level trajectory so conservation holds exactly.
    s.hv(j, 0) = p.hv_initial;
    for (int t = 1; t < hours; ++t) {
      s.hv(j, t) = s.hv(j, t - 1) + p.level_delta(s.hg(j, t));
    }
    residual[j] = std::fabs(s.hv(j, t_final) - s.hv(j, 0));
  }
  return residual;
}

RepairOutcome full_repair(const Chromosome& c, const ProblemInstance& inst,
                          const RepairOptions& opts) {
  RepairOutcome out;
  out.schedule = repair_stage_chain(decode(c, inst), inst);
  repair_supply_demand(out.schedule, c, inst, opts);
  out.water_residual = repair_water_terminal(out.schedule, inst);
  // The water repair shifts the balance at the hours it touched; recomputing
  // the residual series from the final schedule charges those shifts to the
  // supply penalty.
  out.supply_residual = check_supply_demand(out.schedule, inst);
  return out;
}

}  // namespace ucld
