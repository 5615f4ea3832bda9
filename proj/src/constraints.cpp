#include "ucld/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace ucld {

namespace {

double outside(double x, double lo, double hi) {
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0.0;
}

}  // namespace

std::vector<double> check_supply_demand(const Schedule& s,
                                        const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  std::vector<double> residual(hours, 0.0);
  for (int t = 0; t < hours; ++t) {
    double supply = 0.0;
    for (int i = 0; i < inst.n_thermal(); ++i) {
      if (s.u(i, t)) supply += s.g(i, t);
    }
    for (int j = 0; j < inst.n_hydro(); ++j) supply += s.hg(j, t);
    residual[t] = supply - inst.demand.net_demand[t];
  }
  return residual;
}

std::vector<ReservePair> check_spinning_reserve(const Schedule& s,
                                                const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  // Hydro capability is its full static range: it can always back off to
  // maximum pumping or ramp up to maximum generation within the hour.
  double hydro_min = 0.0;
  double hydro_max = 0.0;
  for (const auto& p : inst.hydro) {
    hydro_min -= p.hp_max;
    hydro_max += p.hg_max;
  }

  std::vector<ReservePair> out(hours);
  for (int t = 0; t < hours; ++t) {
    double cap_min = hydro_min;
    double cap_max = hydro_max;
    for (int i = 0; i < inst.n_thermal(); ++i) {
      if (!s.u(i, t)) continue;
      const auto& p = inst.thermal[i];
      double lo = p.g_min;
      double hi = p.g_max;
      if (inst.ramp_aware_reserve) {
        const double prev = t > 0 ? s.g(i, t - 1) : s.g(i, t);
        lo = std::max(lo, prev - p.ramp_down);
        hi = std::min(hi, prev + p.ramp_up);
      }
      cap_min += lo;
      cap_max += hi;
    }
    const double net = inst.demand.net_demand[t];
    out[t].s1 = cap_min - (1.0 - inst.demand.alpha[t]) * net;
    out[t].s2 = (1.0 + inst.demand.beta[t]) * net - cap_max;
  }
  return out;
}

ThermalViolations check_thermal(const Schedule& s,
                                const ProblemInstance& inst) {
  ThermalViolations v;
  const int hours = inst.n_hours();
  for (int i = 0; i < inst.n_thermal(); ++i) {
    const auto& p = inst.thermal[i];
    int off_run = 0;  // pre-horizon state: plant on
    for (int t = 0; t < hours; ++t) {
      if (s.u(i, t)) {
        v.bounds += outside(s.g(i, t), p.g_min, p.g_max);
        if (off_run > 0 && off_run < p.mdt) v.mdt += 1.0;
        off_run = 0;
      } else {
        ++off_run;
      }
      if (t > 0) {
        const double delta = s.g(i, t) - s.g(i, t - 1);
        if (delta > p.ramp_up) v.ramp += delta - p.ramp_up;
        if (-delta > p.ramp_down) v.ramp += -delta - p.ramp_down;
      }
    }
  }
  return v;
}

HydroViolations check_hydro(const Schedule& s, const ProblemInstance& inst) {
  HydroViolations v;
  const int hours = inst.n_hours();
  for (int j = 0; j < inst.n_hydro(); ++j) {
    const auto& p = inst.hydro[j];
    for (int t = 0; t < hours; ++t) {
      const double hg = s.hg(j, t);
      if (hg > 0.0) {
        v.pump_bounds += outside(hg, p.hg_min, p.hg_max);
      } else if (hg < 0.0) {
        v.pump_bounds += outside(-hg, p.hp_min, p.hp_max);
      }
      const double prev = t > 0 ? s.hg(j, t - 1) : 0.0;
      if (hg > 0.0) {
        const double rise = hg - prev;
        if (rise > p.ramp_gen_up) v.ramp_gen += rise - p.ramp_gen_up;
      } else if (hg < 0.0) {
        const double draw_rise = prev - hg;
        if (draw_rise > p.ramp_pump_down) {
          v.ramp_pump += draw_rise - p.ramp_pump_down;
        }
      }
      v.capacity += outside(s.hv(j, t), p.hv_min, p.hv_max);
    }
    v.terminal += std::fabs(s.hv(j, hours - 1) - s.hv(j, 0));
  }
  return v;
}

ViolationReport check_all(const Schedule& s, const ProblemInstance& inst) {
  ViolationReport r;
  for (double res : check_supply_demand(s, inst)) {
    r.supply_demand += std::fabs(res);
  }
  for (const auto& pair : check_spinning_reserve(s, inst)) {
    r.reserve_low += std::max(pair.s1, 0.0);
    r.reserve_high += std::max(pair.s2, 0.0);
  }
  const ThermalViolations tv = check_thermal(s, inst);
  r.thermal_bounds = tv.bounds;
  r.thermal_ramp = tv.ramp;
  r.mdt = tv.mdt;
  const HydroViolations hv = check_hydro(s, inst);
  r.pump_bounds = hv.pump_bounds;
  r.pump_ramp_gen = hv.ramp_gen;
  r.pump_ramp_pump = hv.ramp_pump;
  r.water_capacity = hv.capacity;
  r.water_terminal = hv.terminal;
  return r;
}

}  // namespace ucld
