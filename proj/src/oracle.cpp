#include "ucld/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

#include "ucld/constraints.hpp"

namespace ucld {

namespace {

constexpr double kBalanceTol = 1e-8;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

double supply_at_lambda(const ThermalPlant& p, double lam) {
  if (p.cost_c > 0.0) {
    return clamp((lam - p.cost_b) / (2.0 * p.cost_c), p.g_min, p.g_max);
  }
  // Linear plant: full output above its crossing, minimum below; the
  // plateau at lam == B is distributed after bisection.
  return lam > p.cost_b ? p.g_max : p.g_min;
}

}  // namespace

DispatchResult dispatch_qp(const std::vector<int>& committed, double demand,
                           const std::vector<ThermalPlant>& plants) {
  DispatchResult res;
  res.g.assign(plants.size(), 0.0);
  if (committed.empty()) {
    if (std::fabs(demand) > kBalanceTol) {
      throw OracleInfeasible("dispatch: nonzero demand with no committed plant");
    }
    return res;
  }

  double sum_min = 0.0;
  double sum_max = 0.0;
  for (int i : committed) {
    sum_min += plants[i].g_min;
    sum_max += plants[i].g_max;
  }
  if (demand < sum_min - kBalanceTol || demand > sum_max + kBalanceTol) {
    throw OracleInfeasible("dispatch: demand outside committed capacity range");
  }
  demand = clamp(demand, sum_min, sum_max);

  double lo = kInf;
  double hi = -kInf;
  for (int i : committed) {
    lo = std::min(lo, plants[i].marginal_cost(plants[i].g_min));
    hi = std::max(hi, plants[i].marginal_cost(plants[i].g_max));
  }
  lo -= 1.0;
  hi += 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (int i : committed) s += supply_at_lambda(plants[i], mid);
    if (s < demand) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lam = 0.5 * (lo + hi);

  double sum = 0.0;
  for (int i : committed) {
    res.g[i] = supply_at_lambda(plants[i], lam);
    sum += res.g[i];
  }
  double rem = demand - sum;
  // Linear plants sitting on their crossing hold the plateau remainder. The
  // bisection may settle one ulp on either side of the jump, so the
  // correction runs in both directions.
  for (int i : committed) {
    if (std::fabs(rem) <= 1e-12) break;
    const auto& p = plants[i];
    if (p.cost_c == 0.0 && std::fabs(p.cost_b - lam) <= 1e-6) {
      const double adjusted = clamp(res.g[i] + rem, p.g_min, p.g_max);
      rem -= adjusted - res.g[i];
      res.g[i] = adjusted;
    }
  }
  // Rounding dust from the bisection.
  for (int i : committed) {
    if (std::fabs(rem) <= 1e-12) break;
    const auto& p = plants[i];
    const double adjusted = clamp(res.g[i] + rem, p.g_min, p.g_max);
    rem -= adjusted - res.g[i];
    res.g[i] = adjusted;
  }
  if (std::fabs(rem) > kBalanceTol) {
    throw OracleInfeasible("dispatch: bisection failed to balance");
  }
  for (int i : committed) res.cost += plants[i].fuel_cost(res.g[i]);
  return res;
}

namespace {

// Shared DFS machinery for the exhaustive unit-commitment search.
struct UcSearcher {
  const ProblemInstance& inst;
  long budget;
  long nodes = 0;

  int ng;
  int hours;
  int n_masks;
  // Hour-level dispatch memo; nullopt marks capacity-infeasible masks.
  std::vector<std::unordered_map<int, std::optional<DispatchResult>>> memo;

  Matrix<std::uint8_t> u;
  Matrix<double> g;
  std::vector<int> off_run;
  double best_cost = kInf;
  Matrix<std::uint8_t> best_u;
  Matrix<double> best_g;

  explicit UcSearcher(const ProblemInstance& instance, long node_budget)
      : inst(instance),
        budget(node_budget),
        ng(instance.n_thermal()),
        hours(instance.n_hours()),
        n_masks(1 << instance.n_thermal()),
        memo(instance.n_hours()),
        u(instance.n_thermal(), instance.n_hours()),
        g(instance.n_thermal(), instance.n_hours()),
        off_run(instance.n_thermal(), 0) {}

  std::optional<DispatchResult> dispatch_for(int t, int mask) {
    auto it = memo[t].find(mask);
    if (it != memo[t].end()) return it->second;
    std::vector<int> committed;
    for (int i = 0; i < ng; ++i) {
      if (mask & (1 << i)) committed.push_back(i);
    }
    std::optional<DispatchResult> result;
    try {
      result = dispatch_qp(committed, inst.demand.net_demand[t], inst.thermal);
    } catch (const OracleInfeasible&) {
      result = std::nullopt;
    }
    memo[t].emplace(mask, result);
    return result;
  }

  void search(int t, double cost_so_far) {
    if (cost_so_far >= best_cost) return;
    if (t == hours) {
      best_cost = cost_so_far;
      best_u = u;
      best_g = g;
      return;
    }
    for (int mask = 0; mask < n_masks; ++mask) {
      if (++nodes > budget) {
        throw OracleBudgetExceeded("enumerate_uc: node budget exceeded");
      }
      bool ok = true;
      for (int i = 0; i < ng && ok; ++i) {
        const bool on = mask & (1 << i);
        if (on && off_run[i] > 0 && off_run[i] < inst.thermal[i].mdt) {
          ok = false;  // minimum downtime not served yet
        }
      }
      if (!ok) continue;

      const std::optional<DispatchResult> dispatch = dispatch_for(t, mask);
      if (!dispatch) continue;

      double startup = 0.0;
      for (int i = 0; i < ng && ok; ++i) {
        const bool on = mask & (1 << i);
        const double gi = on ? dispatch->g[i] : 0.0;
        if (t > 0) {
          const double delta = gi - g(i, t - 1);
          if (delta > inst.thermal[i].ramp_up + 1e-12 ||
              -delta > inst.thermal[i].ramp_down + 1e-12) {
            ok = false;
          }
        }
        if (on && off_run[i] > 0) startup += inst.thermal[i].startup_cost;
      }
      if (!ok) continue;

      std::vector<int> saved_off = off_run;
      for (int i = 0; i < ng; ++i) {
        const bool on = mask & (1 << i);
        u(i, t) = on ? 1 : 0;
        g(i, t) = on ? dispatch->g[i] : 0.0;
        off_run[i] = on ? 0 : off_run[i] + 1;
      }
      search(t + 1, cost_so_far + dispatch->cost + startup);
      off_run = std::move(saved_off);
    }
  }
};

Schedule make_schedule(const ProblemInstance& inst, Matrix<std::uint8_t> u,
                       Matrix<double> g) {
  Schedule s;
  s.u = std::move(u);
  s.g = std::move(g);
  s.hg = Matrix<double>(inst.n_hydro(), inst.n_hours());
  s.hv = Matrix<double>(inst.n_hydro(), inst.n_hours());
  roll_water(s, inst);
  return s;
}

}  // namespace

OracleResult enumerate_uc(const ProblemInstance& inst, int horizon_hours,
                          long budget) {
  const ProblemInstance work =
      horizon_hours > 0 ? inst.truncated(horizon_hours) : inst;
  if (work.n_thermal() > 20) {
    throw OracleBudgetExceeded("enumerate_uc: too many thermal plants");
  }
  UcSearcher searcher(work, budget);
  searcher.search(0, 0.0);
  if (!std::isfinite(searcher.best_cost)) {
    throw OracleInfeasible("enumerate_uc: no feasible commitment");
  }
  OracleResult out;
  out.schedule = make_schedule(work, std::move(searcher.best_u),
                               std::move(searcher.best_g));
  out.cost = searcher.best_cost;
  out.nodes = searcher.nodes;
  return out;
}

namespace {

struct GridSearcher {
  const ProblemInstance& inst;
  long budget;
  long nodes = 0;

  int ng;
  int nhg;
  int hours;
  // Options per thermal plant; index 0 is "off", others are output levels.
  std::vector<std::vector<double>> thermal_opts;
  // Options per enumerated hydro plant (all but the last).
  std::vector<std::vector<double>> hydro_opts;

  Schedule s;
  std::vector<int> off_run;
  double best_cost = kInf;
  Schedule best;
  bool found = false;

  GridSearcher(const ProblemInstance& instance, double step, long node_budget)
      : inst(instance),
        budget(node_budget),
        ng(instance.n_thermal()),
        nhg(instance.n_hydro()),
        hours(instance.n_hours()),
        off_run(instance.n_thermal(), 0) {
    s.u = Matrix<std::uint8_t>(ng, hours);
    s.g = Matrix<double>(ng, hours);
    s.hg = Matrix<double>(nhg, hours);
    s.hv = Matrix<double>(nhg, hours);
    for (int j = 0; j < nhg; ++j) s.hv(j, 0) = inst.hydro[j].hv_initial;

    auto band_points = [step](double lo, double hi) {
      std::vector<double> pts;
      for (int k = 0;; ++k) {
        const double v = lo + k * step;
        if (v >= hi - 1e-12) break;
        pts.push_back(v);
      }
      pts.push_back(hi);
      return pts;
    };
    for (const auto& p : inst.thermal) {
      std::vector<double> opts{0.0};  // off
      for (double v : band_points(p.g_min, p.g_max)) opts.push_back(v);
      thermal_opts.push_back(std::move(opts));
    }
    for (int j = 0; j + 1 < nhg; ++j) {
      const auto& p = inst.hydro[j];
      std::vector<double> opts{0.0};
      if (p.hg_max > 0.0) {
        for (double v : band_points(p.hg_min > 0.0 ? p.hg_min : step, p.hg_max)) {
          opts.push_back(v);
        }
      }
      if (p.hp_max > 0.0) {
        for (double v : band_points(p.hp_min > 0.0 ? p.hp_min : step, p.hp_max)) {
          opts.push_back(-v);
        }
      }
      hydro_opts.push_back(std::move(opts));
    }
  }

  bool hydro_value_admissible(const PumpedStoragePlant& p, double v) const {
    if (std::fabs(v) <= 1e-9) return true;
    if (v > 0.0) return v >= p.hg_min - 1e-9 && v <= p.hg_max + 1e-9;
    return -v >= p.hp_min - 1e-9 && -v <= p.hp_max + 1e-9;
  }

  // Ramp and water checks for hydro plant j at hour t; fills hv on success.
  bool hydro_ok(int j, int t) {
    const auto& p = inst.hydro[j];
    const double hg = s.hg(j, t);
    const double prev = t > 0 ? s.hg(j, t - 1) : 0.0;
    if (hg > 0.0 && hg - prev > p.ramp_gen_up + 1e-9) return false;
    if (hg < 0.0 && prev - hg > p.ramp_pump_down + 1e-9) return false;
    if (t >= 1) {
      const double level = s.hv(j, t - 1) + p.level_delta(hg);
      if (level < p.hv_min - 1e-9 || level > p.hv_max + 1e-9) return false;
      s.hv(j, t) = level;
    }
    return true;
  }

  void enter_hour(int t, double thermal_sum, double hour_cost) {
    // Assign enumerated hydro plants, then derive the last one from balance.
    assign_hydro(t, 0, thermal_sum, hour_cost);
  }

  void assign_hydro(int t, int j, double supply, double hour_cost) {
    if (j + 1 < nhg) {
      for (double v : hydro_opts[j]) {
        s.hg(j, t) = v;
        if (!hydro_ok(j, t)) continue;
        assign_hydro(t, j + 1, supply + v, hour_cost);
      }
      return;
    }
    const double need = inst.demand.net_demand[t] - supply;
    if (nhg == 0) {
      if (std::fabs(need) > 1e-9) return;
      finish_hour(t, hour_cost);
      return;
    }
    const int last = nhg - 1;
    double v = std::fabs(need) <= 1e-12 ? 0.0 : need;
    if (!hydro_value_admissible(inst.hydro[last], v)) return;
    s.hg(last, t) = v;
    if (!hydro_ok(last, t)) return;
    finish_hour(t, hour_cost);
  }

  void finish_hour(int t, double hour_cost) {
    std::vector<int> saved_off = off_run;
    for (int i = 0; i < ng; ++i) {
      off_run[i] = s.u(i, t) ? 0 : off_run[i] + 1;
    }
    search(t + 1, hour_cost);
    off_run = std::move(saved_off);
  }

  void assign_thermal(int t, int i, double sum, double cost_so_far) {
    if (++nodes > budget) {
      throw OracleBudgetExceeded("brute_force_grid: node budget exceeded");
    }
    if (cost_so_far >= best_cost) return;
    if (i == ng) {
      enter_hour(t, sum, cost_so_far);
      return;
    }
    const auto& p = inst.thermal[i];
    const double prev = t > 0 ? s.g(i, t - 1) : 0.0;
    for (std::size_t k = 0; k < thermal_opts[i].size(); ++k) {
      const bool on = k > 0;
      const double gi = thermal_opts[i][k];
      if (on && off_run[i] > 0 && off_run[i] < p.mdt) continue;
      if (t > 0) {
        const double delta = gi - prev;
        if (delta > p.ramp_up + 1e-12 || -delta > p.ramp_down + 1e-12) {
          continue;
        }
      }
      s.u(i, t) = on ? 1 : 0;
      s.g(i, t) = gi;
      double cost = cost_so_far;
      if (on) {
        cost += p.cost_a + gi * (p.cost_b + p.cost_c * gi);
        if (off_run[i] > 0) cost += p.startup_cost;
      }
      assign_thermal(t, i + 1, sum + gi, cost);
    }
  }

  void search(int t, double cost_so_far) {
    if (cost_so_far >= best_cost) return;
    if (t == hours) {
      // The constraints module is the feasibility authority for candidates.
      Schedule candidate = s;
      roll_water(candidate, inst);
      if (!check_all(candidate, inst).feasible()) return;
      best_cost = cost_so_far;
      best = std::move(candidate);
      found = true;
      return;
    }
    assign_thermal(t, 0, 0.0, cost_so_far);
  }
};

}  // namespace

OracleResult brute_force_grid(const ProblemInstance& inst, int horizon_hours,
                              double grid_step, long budget) {
  if (!(grid_step > 0.0)) {
    throw OracleError("brute_force_grid: grid_step must be positive");
  }
  const ProblemInstance work =
      horizon_hours > 0 ? inst.truncated(horizon_hours) : inst;
  GridSearcher searcher(work, grid_step, budget);
  searcher.search(0, 0.0);
  if (!searcher.found) {
    throw OracleInfeasible("brute_force_grid: no feasible grid point");
  }
  OracleResult out;
  out.schedule = std::move(searcher.best);
  out.cost = searcher.best_cost;
  out.nodes = searcher.nodes;
  return out;
}

}  // namespace ucld
