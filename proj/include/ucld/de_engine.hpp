#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ucld/encoding.hpp"
#include "ucld/model.hpp"
#include "ucld/penalty.hpp"
#include "ucld/repair.hpp"
#include "ucld/rng.hpp"

namespace ucld {

struct DEConfig {
  int population_size = 2000;
  long max_generations = 80000;
  double cr = 0.8;
  // F is resampled uniformly in [0, 1) for every mutation call.
  double init_lo = -10.0;
  double init_hi = 10.0;
  long rc = 10000;  // genotype reset period, in function evaluations
  std::uint64_t seed = 1;
  int threads = 1;  // fitness evaluations per generation run on this many
  RepairOptions repair;
  PenaltySchedule penalty;  // template; the generation counter starts at 0
};

struct TraceRow {
  long generation = 0;
  double best_total = 0.0;
  double best_cost = 0.0;
  double best_penalty = 0.0;
  int feasible_count = 0;
};

struct BestSolution {
  Chromosome chromosome;
  EvaluationReport report;  // under the snapshot at capture time
  long generation = 0;
};

struct RunResult {
  // Lowest-total solution whose penalty was below the feasibility threshold
  // when it was evaluated; empty if no evaluation was ever feasible.
  std::optional<BestSolution> best_feasible;
  // Best of the final population under the final penalty snapshot.
  BestSolution final_best;
  std::vector<TraceRow> trace;  // one row per executed generation
  long evaluations = 0;
  double wall_seconds = 0.0;

  const BestSolution& best() const {
    return best_feasible ? *best_feasible : final_best;
  }
};

// rand/1 mutation: v = x_r1 + F * (x_r2 - x_r3) over the flattened genome,
// with r1, r2, r3 drawn distinct from each other and from i. Throws when the
// population has fewer than four members.
Chromosome mutate(const std::vector<Chromosome>& pop, int i, double F,
                  Rng& rng);

// Binomial crossover: component j takes the mutant value when rand() < cr or
// j is the one forced index.
Chromosome crossover(const Chromosome& x, const Chromosome& v, double cr,
                     Rng& rng);

// Per-individual selection: the trial survives only on strict improvement;
// ties keep the incumbent. Totals must come from the same penalty snapshot.
bool select_trial(double incumbent_total, double trial_total);

// Full optimization loop: seeded initialization, per-generation penalty
// advance, mutate/crossover/repair/evaluate/select per individual, and the
// periodic genotype reset to repaired values. All random draws happen on one
// serial stream in index order, so results do not depend on thread count.
RunResult run(const ProblemInstance& inst, const DEConfig& config);

}  // namespace ucld
