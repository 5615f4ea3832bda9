#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ucld/constraints.hpp"
#include "ucld/csv.hpp"
#include "ucld/de_engine.hpp"
#include "ucld/model.hpp"
#include "ucld/oracle.hpp"
#include "ucld/penalty.hpp"
#include "ucld/repair.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ucld;

namespace {

struct EngineOptions {
  std::string instance_path;
  int horizon = 0;  // 0 = full profile
  DEConfig config;
  std::string out_dir = ".";
  bool ramp_aware_reserve = false;
  bool plot_data = false;
};

void add_engine_options(CLI::App* cmd, EngineOptions& opt) {
  cmd->add_option("instance", opt.instance_path, "instance file")->required();
  cmd->add_option("--pop", opt.config.population_size, "population size");
  cmd->add_option("--gens", opt.config.max_generations, "generations");
  cmd->add_option("--cr", opt.config.cr, "crossover rate");
  cmd->add_option("--rc", opt.config.rc,
                  "genotype reset period in evaluations (0 disables)");
  cmd->add_option("--seed", opt.config.seed, "master RNG seed");
  cmd->add_option("--threads", opt.config.threads,
                  "threads for fitness evaluation");
  cmd->add_option("--horizon", opt.horizon, "truncate the profile to H hours");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--max-supply-coeff", opt.config.penalty.supply_coeff_max,
                  "supply-demand penalty coefficient cap");
  cmd->add_option("--max-water-coeff", opt.config.penalty.water_coeff_max,
                  "water-level penalty coefficient cap");
  cmd->add_option("--coeff-step", opt.config.penalty.step,
                  "penalty coefficient increase per generation");
  cmd->add_option("--reserve-weight", opt.config.penalty.reserve_weight,
                  "spinning-reserve penalty weight");
  cmd->add_option("--max-adjustments", opt.config.repair.max_adjustments,
                  "supply-demand repair passes per hour");
  cmd->add_option("--init-lo", opt.config.init_lo, "initial gene lower bound");
  cmd->add_option("--init-hi", opt.config.init_hi, "initial gene upper bound");
  cmd->add_flag("--ramp-aware-reserve", opt.ramp_aware_reserve,
                "tighten reserve capabilities by thermal ramps");
}

ProblemInstance load_for(const EngineOptions& opt) {
  ProblemInstance inst = load_instance(opt.instance_path);
  if (opt.horizon > 0) inst = inst.truncated(opt.horizon);
  inst.ramp_aware_reserve = opt.ramp_aware_reserve;
  for (const auto& w : inst.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return inst;
}

json report_json(const EvaluationReport& r) {
  return json{{"fuel_cost", r.fuel_cost},
              {"startup_cost", r.startup_cost},
              {"supply_penalty", r.supply_penalty},
              {"water_penalty", r.water_penalty},
              {"reserve_penalty", r.reserve_penalty},
              {"total", r.total},
              {"cost", r.cost()},
              {"penalty", r.penalty()},
              {"penalty_at_caps", r.penalty_at_caps},
              {"feasible", r.feasible},
              {"supply_residual_sum", r.supply_residual_sum},
              {"water_residual_sum", r.water_residual_sum},
              {"reserve_shortfall_sum", r.reserve_shortfall_sum},
              {"supply_coeff", r.supply_coeff},
              {"water_coeff", r.water_coeff},
              {"reserve_weight", r.reserve_weight}};
}

json violations_json(const ViolationReport& v) {
  return json{{"supply_demand", v.supply_demand},
              {"reserve_low", v.reserve_low},
              {"reserve_high", v.reserve_high},
              {"thermal_bounds", v.thermal_bounds},
              {"thermal_ramp", v.thermal_ramp},
              {"mdt", v.mdt},
              {"pump_bounds", v.pump_bounds},
              {"pump_ramp_gen", v.pump_ramp_gen},
              {"pump_ramp_pump", v.pump_ramp_pump},
              {"water_capacity", v.water_capacity},
              {"water_terminal", v.water_terminal}};
}

void write_plot_data(const fs::path& dir, const Schedule& s,
                     const ProblemInstance& inst) {
  {
    std::ofstream out(dir / "plot_supply.csv");
    out << "t,net_demand,thermal_total,hydro_total,supply_total\n";
    for (int t = 0; t < inst.n_hours(); ++t) {
      double thermal = 0.0;
      for (int i = 0; i < inst.n_thermal(); ++i) {
        if (s.u(i, t)) thermal += s.g(i, t);
      }
      double hydro = 0.0;
      for (int j = 0; j < inst.n_hydro(); ++j) hydro += s.hg(j, t);
      out << t << ',' << format_double(inst.demand.net_demand[t]) << ','
          << format_double(thermal) << ',' << format_double(hydro) << ','
          << format_double(thermal + hydro) << "\n";
    }
  }
  {
    std::ofstream out(dir / "plot_reserve.csv");
    out << "t,required_low,required_high,capability_min,capability_max\n";
    const auto pairs = check_spinning_reserve(s, inst);
    for (int t = 0; t < inst.n_hours(); ++t) {
      const double net = inst.demand.net_demand[t];
      const double req_low = (1.0 - inst.demand.alpha[t]) * net;
      const double req_high = (1.0 + inst.demand.beta[t]) * net;
      out << t << ',' << format_double(req_low) << ','
          << format_double(req_high) << ','
          << format_double(pairs[t].s1 + req_low) << ','
          << format_double(req_high - pairs[t].s2) << "\n";
    }
  }
}

// Re-evaluates the exported schedule under the recorded coefficients and
// compares totals; any drift means the artifacts are inconsistent.
bool verify_artifacts(const fs::path& schedule_path,
                      const ProblemInstance& inst, const BestSolution& best) {
  const Schedule restored = read_schedule_csv(schedule_path, inst);
  RepairOutcome out;
  out.schedule = restored;
  out.supply_residual = check_supply_demand(restored, inst);
  for (int j = 0; j < inst.n_hydro(); ++j) {
    out.water_residual.push_back(
        std::fabs(restored.hv(j, inst.n_hours() - 1) - restored.hv(j, 0)));
  }
  PenaltySchedule frozen;
  frozen.supply_coeff_max = best.report.supply_coeff;
  frozen.water_coeff_max = best.report.water_coeff;
  frozen.reserve_weight = best.report.reserve_weight;
  frozen.step = 1.0;
  frozen.generation = 1000000000L;  // pin both coefficients at their caps
  const EvaluationReport check = penalties(out, frozen, inst);
  return std::fabs(check.total - best.report.total) <= 1e-9;
}

int cmd_solve(const EngineOptions& opt) {
  const ProblemInstance inst = load_for(opt);
  fs::create_directories(opt.out_dir);
  const RunResult result = run(inst, opt.config);
  const BestSolution& best = result.best();

  const RepairOutcome out =
      full_repair(best.chromosome, inst, opt.config.repair);
  const fs::path dir(opt.out_dir);
  write_schedule_csv(dir / "schedule.csv", out.schedule, inst);
  write_trace_csv(dir / "trace.csv", result.trace);
  if (opt.plot_data) write_plot_data(dir, out.schedule, inst);

  json doc;
  doc["instance"] = inst.name;
  doc["seed"] = opt.config.seed;
  doc["generations"] = result.trace.size();
  doc["evaluations"] = result.evaluations;
  doc["best_from"] =
      result.best_feasible ? "best_feasible" : "final_population";
  doc["best_generation"] = best.generation;
  doc["evaluation"] = report_json(best.report);
  doc["violations"] = violations_json(check_all(out.schedule, inst));
  {
    std::ofstream json_out(dir / "report.json");
    json_out << doc.dump(2) << "\n";
  }

  if (!verify_artifacts(dir / "schedule.csv", inst, best)) {
    std::cerr << "error: report.json does not match schedule.csv\n";
    return 1;
  }

  std::cout << "best total " << format_double(best.report.total) << " (cost "
            << format_double(best.report.cost()) << ", penalty "
            << format_double(best.report.penalty()) << ", "
            << (best.report.feasible ? "feasible" : "infeasible") << ")\n";
  return best.report.feasible ? 0 : 2;
}

struct BatchRow {
  std::uint64_t seed = 0;
  double cost = 0.0;
  double total = 0.0;
  double penalty = 0.0;
  double reserve_penalty = 0.0;
  bool feasible = false;
};

int cmd_batch(const EngineOptions& opt, int runs, std::uint64_t seed_base,
              const std::vector<std::uint64_t>& explicit_seeds, int jobs) {
  const ProblemInstance inst = load_for(opt);
  fs::create_directories(opt.out_dir);

  std::vector<std::uint64_t> seeds = explicit_seeds;
  if (seeds.empty()) {
    for (int k = 0; k < runs; ++k) seeds.push_back(seed_base + k);
  }

  std::vector<BatchRow> rows(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= seeds.size()) return;
      DEConfig cfg = opt.config;
      cfg.seed = seeds[k];
      const RunResult result = run(inst, cfg);
      const EvaluationReport& r = result.best().report;
      rows[k] = BatchRow{seeds[k],    r.cost(),          r.total,
                         r.penalty(), r.reserve_penalty, r.feasible};
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::future<void>> futs;
    for (int w = 0; w < jobs; ++w) {
      futs.push_back(std::async(std::launch::async, worker));
    }
    for (auto& f : futs) f.get();
  }

  std::ofstream csv(fs::path(opt.out_dir) / "batch.csv");
  csv << "seed,cost,fitness,total_penalty,reserve_penalty,feasible\n";
  for (const auto& row : rows) {
    csv << row.seed << ',' << format_double(row.cost) << ','
        << format_double(-row.cost) << ',' << format_double(row.penalty)
        << ',' << format_double(row.reserve_penalty) << ','
        << (row.feasible ? 1 : 0) << "\n";
  }

  // Mean and deviation follow the reporting convention: they are taken over
  // the runs whose final solution satisfied all constraints.
  int n_feasible = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  double mean_cost = 0.0, mean_pen = 0.0, mean_res = 0.0;
  for (const auto& row : rows) {
    if (!row.feasible) continue;
    ++n_feasible;
    best_cost = std::min(best_cost, row.cost);
    mean_cost += row.cost;
    mean_pen += row.penalty;
    mean_res += row.reserve_penalty;
  }
  double sd_cost = 0.0, sd_pen = 0.0, sd_res = 0.0;
  if (n_feasible > 0) {
    mean_cost /= n_feasible;
    mean_pen /= n_feasible;
    mean_res /= n_feasible;
    for (const auto& row : rows) {
      if (!row.feasible) continue;
      sd_cost += (row.cost - mean_cost) * (row.cost - mean_cost);
      sd_pen += (row.penalty - mean_pen) * (row.penalty - mean_pen);
      sd_res +=
          (row.reserve_penalty - mean_res) * (row.reserve_penalty - mean_res);
    }
    sd_cost = std::sqrt(sd_cost / n_feasible);
    sd_pen = std::sqrt(sd_pen / n_feasible);
    sd_res = std::sqrt(sd_res / n_feasible);
  }
  const double rate = 100.0 * n_feasible / static_cast<double>(rows.size());

  json summary;
  summary["runs"] = rows.size();
  summary["feasible_runs"] = n_feasible;
  summary["feasible_rate_percent"] = rate;
  if (n_feasible > 0) {
    summary["best_cost"] = best_cost;
    summary["mean_cost"] = mean_cost;
    summary["sd_cost"] = sd_cost;
    summary["mean_total_penalty"] = mean_pen;
    summary["sd_total_penalty"] = sd_pen;
    summary["mean_reserve_penalty"] = mean_res;
    summary["sd_reserve_penalty"] = sd_res;
  }
  {
    std::ofstream json_out(fs::path(opt.out_dir) / "batch_summary.json");
    json_out << summary.dump(2) << "\n";
  }

  std::cout << "Runs                             " << rows.size() << "\n";
  if (n_feasible > 0) {
    std::cout << "Best Solution                    "
              << format_double(best_cost) << "\n";
  }
  std::cout << "Solutions With Penalty < 0.01    " << rate << "%\n";
  if (n_feasible > 0) {
    std::cout << "Cost                             " << mean_cost << " ("
              << sd_cost << ")\n";
    std::cout << "Fitness                          " << -mean_cost << " ("
              << sd_cost << ")\n";
    std::cout << "Total Penalty                    " << mean_pen << " ("
              << sd_pen << ")\n";
    std::cout << "Spinning Reserve Penalty         " << mean_res << " ("
              << sd_res << ")\n";
  }
  return n_feasible > 0 ? 0 : 2;
}

int cmd_oracle(const std::string& instance_path, int horizon, double grid,
               long budget, const std::string& compare_path,
               const std::string& out_dir, bool use_grid) {
  ProblemInstance inst = load_instance(instance_path);
  if (horizon > 0) inst = inst.truncated(horizon);

  const OracleResult result = use_grid || inst.n_hydro() > 0
                                  ? brute_force_grid(inst, -1, grid, budget)
                                  : enumerate_uc(inst, -1, budget);
  std::cout << "oracle cost " << format_double(result.cost) << " ("
            << result.nodes << " nodes)\n";

  fs::create_directories(out_dir);
  write_schedule_csv(fs::path(out_dir) / "oracle_schedule.csv",
                     result.schedule, inst);

  if (compare_path.empty()) return 0;
  const Schedule other = read_schedule_csv(compare_path, inst);
  const CostBreakdown cost = objective_cost(other, inst);
  const ViolationReport v = check_all(other, inst);
  const double total = cost.fuel + cost.startup;
  const double gap = (total - result.cost) / result.cost;
  const bool feasible = v.feasible(1e-6);
  const bool pass = feasible && gap <= 0.01;
  std::cout << "compared cost " << format_double(total) << " (gap "
            << format_double(100.0 * gap) << "%, "
            << (feasible ? "feasible" : "infeasible")
            << "): " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit-commitment / load-dispatch solver"};
  app.require_subcommand(1);

  EngineOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "run the evolutionary solver");
  add_engine_options(solve, solve_opt);
  solve->add_flag("--plot-data", solve_opt.plot_data,
                  "emit supply and reserve curve data");

  EngineOptions batch_opt;
  int batch_runs = 30;
  std::uint64_t batch_seed_base = 1;
  std::vector<std::uint64_t> batch_seeds;
  int batch_jobs = 1;
  CLI::App* batch = app.add_subcommand("batch", "repeated seeded runs");
  add_engine_options(batch, batch_opt);
  batch->add_option("--runs", batch_runs, "number of runs");
  batch->add_option("--seed-base", batch_seed_base,
                    "first seed; run k uses seed-base + k");
  batch->add_option("--seeds", batch_seeds, "explicit seed list");
  batch->add_option("--jobs", batch_jobs, "runs executed in parallel");

  std::string oracle_instance, oracle_compare, oracle_out = ".";
  int oracle_horizon = 0;
  double oracle_grid = 0.25;
  long oracle_budget = kOracleDefaultBudget;
  bool oracle_use_grid = false;
  CLI::App* oracle = app.add_subcommand("oracle", "exact small-scale solver");
  oracle->add_option("instance", oracle_instance, "instance file")->required();
  oracle->add_option("--horizon", oracle_horizon, "truncate to H hours");
  oracle->add_option("--grid", oracle_grid, "grid step for the brute search");
  oracle->add_option("--budget", oracle_budget, "search node budget");
  oracle->add_option("--compare", oracle_compare,
                     "schedule.csv to diff against the oracle");
  oracle->add_option("--out", oracle_out, "output directory");
  oracle->add_flag("--use-grid", oracle_use_grid,
                   "force the grid search even without hydro plants");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_opt);
    if (batch->parsed()) {
      return cmd_batch(batch_opt, batch_runs, batch_seed_base, batch_seeds,
                       batch_jobs);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_instance, oracle_horizon, oracle_grid,
                        oracle_budget, oracle_compare, oracle_out,
                        oracle_use_grid);
    }
  } catch (const OracleBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
