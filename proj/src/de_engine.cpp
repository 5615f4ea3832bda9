#include "ucld/de_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace ucld {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

EvaluationReport rescore(EvaluationReport r, const PenaltySchedule& sched) {
  r.supply_coeff = sched.supply_coeff();
  r.water_coeff = sched.water_coeff();
  r.reserve_weight = sched.reserve_weight;
  r.supply_penalty = r.supply_coeff * r.supply_residual_sum;
  r.water_penalty = r.water_coeff * r.water_residual_sum;
  r.reserve_penalty = r.reserve_weight * r.reserve_shortfall_sum;
  r.total = r.cost() + r.penalty();
  // penalty_at_caps and the feasibility flag do not depend on the snapshot.
  return r;
}

struct Evaluated {
  EvaluationReport report;
  Schedule schedule;
};

Evaluated evaluate(const Chromosome& c, const ProblemInstance& inst,
                   const PenaltySchedule& sched, const RepairOptions& opts) {
  RepairOutcome out = full_repair(c, inst, opts);
  Evaluated e;
  e.report = penalties(out, sched, inst);
  e.schedule = std::move(out.schedule);
  return e;
}

}  // namespace

Chromosome mutate(const std::vector<Chromosome>& pop, int i, double F,
                  Rng& rng) {
  const int n = static_cast<int>(pop.size());
  if (n < 4) {
    throw std::invalid_argument("mutation needs a population of at least 4");
  }
  int r1, r2, r3;
  do {
    r1 = rng.uniform_int(n);
  } while (r1 == i);
  do {
    r2 = rng.uniform_int(n);
  } while (r2 == i || r2 == r1);
  do {
    r3 = rng.uniform_int(n);
  } while (r3 == i || r3 == r1 || r3 == r2);

  std::vector<double> genes = pop[r1].genes();
  const std::vector<double>& b = pop[r2].genes();
  const std::vector<double>& c = pop[r3].genes();
  for (std::size_t k = 0; k < genes.size(); ++k) {
    genes[k] += F * (b[k] - c[k]);
  }
  return Chromosome(pop[i].layout(), std::move(genes));
}

Chromosome crossover(const Chromosome& x, const Chromosome& v, double cr,
                     Rng& rng) {
  const int dim = x.layout().dim();
  const int forced = rng.uniform_int(dim);
  std::vector<double> genes(dim);
  for (int k = 0; k < dim; ++k) {
    const bool take_mutant = rng.uniform01() < cr || k == forced;
    genes[k] = take_mutant ? v.genes()[k] : x.genes()[k];
  }
  return Chromosome(x.layout(), std::move(genes));
}

bool select_trial(double incumbent_total, double trial_total) {
  return trial_total < incumbent_total;
}

RunResult run(const ProblemInstance& inst, const DEConfig& config) {
  if (config.population_size < 4) {
    throw std::invalid_argument("population_size must be at least 4");
  }
  if (config.cr < 0.0 || config.cr > 1.0) {
    throw std::invalid_argument("cr must lie in [0, 1]");
  }

  const auto t_start = std::chrono::steady_clock::now();
  const GenomeLayout layout = GenomeLayout::of(inst);
  const int np = config.population_size;
  Rng rng(config.seed);

  PenaltySchedule sched = config.penalty;
  sched.generation = 0;

  RunResult result;
  std::vector<Chromosome> pop;
  std::vector<EvaluationReport> reports(np);
  pop.reserve(np);

  // All random draws are serial and index-ordered; evaluations are pure
  // functions and may be spread over threads without affecting results.
  for (int i = 0; i < np; ++i) {
    std::vector<double> genes(layout.dim());
    for (double& g : genes) g = rng.uniform(config.init_lo, config.init_hi);
    pop.emplace_back(layout, std::move(genes));
  }

  std::vector<Evaluated> evals(np);
  parallel_for(np, config.threads, [&](int i) {
    evals[i] = evaluate(pop[i], inst, sched, config.repair);
  });

  auto consider_feasible = [&](const Chromosome& c, const EvaluationReport& r,
                               long gen) {
    if (!r.feasible) return;
    if (!result.best_feasible || r.total < result.best_feasible->report.total) {
      result.best_feasible = BestSolution{c, r, gen};
    }
  };

  for (int i = 0; i < np; ++i) {
    reports[i] = evals[i].report;
    ++result.evaluations;
    if (config.rc > 0 && result.evaluations % config.rc == 0) {
      pop[i] = encode_from_schedule(evals[i].schedule, pop[i], inst);
    }
    consider_feasible(pop[i], reports[i], 0);
  }

  std::vector<Chromosome> trials;
  trials.reserve(np);
  for (long gen = 1; gen <= config.max_generations; ++gen) {
    sched.advance();

    trials.clear();
    for (int i = 0; i < np; ++i) {
      const double F = rng.uniform01();
      const Chromosome mutant = mutate(pop, i, F, rng);
      trials.push_back(crossover(pop[i], mutant, config.cr, rng));
    }

    parallel_for(np, config.threads, [&](int i) {
      evals[i] = evaluate(trials[i], inst, sched, config.repair);
    });

    for (int i = 0; i < np; ++i) {
      ++result.evaluations;
      if (config.rc > 0 && result.evaluations % config.rc == 0) {
        trials[i] = encode_from_schedule(evals[i].schedule, trials[i], inst);
      }
      consider_feasible(trials[i], evals[i].report, gen);
      // Both totals go through the same arithmetic path so that equal raw
      // values compare equal to the last bit.
      const double incumbent_total = total_under(reports[i], sched);
      const double trial_total = total_under(evals[i].report, sched);
      if (select_trial(incumbent_total, trial_total)) {
        pop[i] = std::move(trials[i]);
        reports[i] = evals[i].report;
      }
    }

    TraceRow row;
    row.generation = gen;
    int best_i = 0;
    double best_total = total_under(reports[0], sched);
    int feasible = 0;
    for (int i = 0; i < np; ++i) {
      const double total = total_under(reports[i], sched);
      if (total < best_total) {
        best_total = total;
        best_i = i;
      }
      if (reports[i].feasible) ++feasible;
    }
    row.best_total = best_total;
    row.best_cost = reports[best_i].cost();
    row.best_penalty = best_total - reports[best_i].cost();
    row.feasible_count = feasible;
    result.trace.push_back(row);
  }

  int best_i = 0;
  double best_total = total_under(reports[0], sched);
  for (int i = 1; i < np; ++i) {
    const double total = total_under(reports[i], sched);
    if (total < best_total) {
      best_total = total;
      best_i = i;
    }
  }
  result.final_best = BestSolution{pop[best_i], rescore(reports[best_i], sched),
                                   sched.generation};

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

}  // namespace ucld
