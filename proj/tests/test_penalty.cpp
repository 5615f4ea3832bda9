#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "ucld/constraints.hpp"
#include "ucld/penalty.hpp"

using namespace ucld;
using namespace ucld::test;

namespace {

// Gen 1 and Gen 4 rows of the bundled ten-plant fleet; zero reserve margins
// so a must-run plant serving the whole demand stays reserve-feasible.
ProblemInstance two_plants(std::vector<double> net) {
  return make_instance(
      {make_thermal(1, 11, 11, 11, 11, 10, 1.0, 0.01, 0.5, 0.01),
       make_thermal(4, 3.3, 11, 11, 11, 8, 8.0, 6.05, 1.8, 0.063)},
      {}, std::move(net), 0.0, 0.0);
}

}  // namespace

TEST_CASE("fuel and startup costs") {
  SUBCASE("one committed hour of generator 1") {
    ProblemInstance inst = two_plants({11.0});
    Schedule s;
    s.u = Matrix<std::uint8_t>(2, 1);
    s.g = Matrix<double>(2, 1);
    s.hg = Matrix<double>(0, 1);
    s.hv = Matrix<double>(0, 1);
    s.u(0, 0) = 1;
    s.g(0, 0) = 11.0;
    const CostBreakdown c = objective_cost(s, inst);
    CHECK(c.fuel == doctest::Approx(6.72).epsilon(1e-12));
    CHECK(c.startup == 0.0);  // hour zero continues the pre-horizon state
  }
  SUBCASE("all plants off all hours") {
    ProblemInstance inst = two_plants({0.0, 0.0, 0.0});
    Schedule s;
    s.u = Matrix<std::uint8_t>(2, 3);
    s.g = Matrix<double>(2, 3);
    s.hg = Matrix<double>(0, 3);
    s.hv = Matrix<double>(0, 3);
    const CostBreakdown c = objective_cost(s, inst);
    CHECK(c.fuel == 0.0);
    CHECK(c.startup == 0.0);
  }
  SUBCASE("an off-then-on transition charges generator 4's startup") {
    ProblemInstance inst = two_plants({0.0, 11.0, 11.0});
    Schedule s;
    s.u = Matrix<std::uint8_t>(2, 3);
    s.g = Matrix<double>(2, 3);
    s.hg = Matrix<double>(0, 3);
    s.hv = Matrix<double>(0, 3);
    s.u(1, 1) = 1;
    s.g(1, 1) = 11.0;
    s.u(1, 2) = 1;
    s.g(1, 2) = 11.0;
    const CostBreakdown c = objective_cost(s, inst);
    CHECK(c.startup == doctest::Approx(8.0).epsilon(1e-12));
  }
}

TEST_CASE("penalty coefficient schedule") {
  PenaltySchedule sched;
  CHECK(sched.supply_coeff() == 0.0);
  CHECK(sched.water_coeff() == 0.0);
  sched.generation = 100;
  CHECK(sched.supply_coeff() == doctest::Approx(2.5).epsilon(1e-12));
  sched.generation = 4000;
  CHECK(sched.water_coeff() == 100.0);  // water cap reached first
  CHECK(sched.supply_coeff() == doctest::Approx(100.0).epsilon(1e-12));
  sched.generation = 40000;
  CHECK(sched.supply_coeff() == 1000.0);
  sched.generation = 90000;
  CHECK(sched.supply_coeff() == 1000.0);
  CHECK(sched.water_coeff() == 100.0);

  // Nondecreasing in the generation counter.
  PenaltySchedule walk;
  double last = -1.0;
  for (int gen = 0; gen < 50000; gen += 97) {
    walk.generation = gen;
    CHECK(walk.supply_coeff() >= last);
    last = walk.supply_coeff();
  }
}

TEST_CASE("penalty assembly") {
  const ProblemInstance inst = two_plants({11.0});
  RepairOutcome out;
  out.schedule.u = Matrix<std::uint8_t>(2, 1);
  out.schedule.g = Matrix<double>(2, 1);
  out.schedule.hg = Matrix<double>(0, 1);
  out.schedule.hv = Matrix<double>(0, 1);
  out.schedule.u(0, 0) = 1;
  out.schedule.g(0, 0) = 11.0;
  out.supply_residual = {0.0};
  out.water_residual = {};

  SUBCASE("feasible case: total equals cost") {
    PenaltySchedule sched;
    sched.generation = 1000;
    const EvaluationReport r = penalties(out, sched, inst);
    CHECK(r.supply_penalty == 0.0);
    CHECK(r.water_penalty == 0.0);
    CHECK(r.reserve_penalty == 0.0);
    CHECK(r.total == doctest::Approx(6.72).epsilon(1e-12));
    CHECK(r.feasible);
  }
  SUBCASE("zero coefficients hide residuals but not reserve shortfalls") {
    RepairOutcome bad = out;
    bad.supply_residual = {3.0};
    bad.schedule.u(0, 0) = 0;  // nothing committed: the high envelope opens
    bad.schedule.g(0, 0) = 0.0;
    PenaltySchedule sched;  // generation 0
    const EvaluationReport r = penalties(bad, sched, inst);
    CHECK(r.supply_penalty == 0.0);
    CHECK(r.reserve_penalty == doctest::Approx(11.0).epsilon(1e-12));
    CHECK(!r.feasible);
  }
  SUBCASE("ramped coefficients multiply the residual sums") {
    RepairOutcome bad = out;
    bad.supply_residual = {2.0};
    PenaltySchedule sched;
    sched.generation = 40;  // coefficient 1.0
    const EvaluationReport r = penalties(bad, sched, inst);
    CHECK(r.supply_penalty == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(6.72 + 2.0).epsilon(1e-12));
    CHECK(!r.feasible);
  }
  SUBCASE("water residuals use the water coefficient") {
    const ProblemInstance hinst = make_instance(
        {make_thermal(1, 11, 11, 11, 11, 10, 1.0, 0.01, 0.5, 0.01)},
        {make_hydro(1, 2.5, 2.5, 0.8, 100, 10)}, {11.0});
    RepairOutcome hout;
    hout.schedule.u = Matrix<std::uint8_t>(1, 1);
    hout.schedule.g = Matrix<double>(1, 1);
    hout.schedule.hg = Matrix<double>(1, 1);
    hout.schedule.hv = Matrix<double>(1, 1);
    hout.schedule.u(0, 0) = 1;
    hout.schedule.g(0, 0) = 11.0;
    hout.schedule.hv(0, 0) = 50.0;
    hout.supply_residual = {0.0};
    hout.water_residual = {0.4};
    PenaltySchedule sched;
    sched.generation = 8000;  // water coefficient saturated at 100
    const EvaluationReport r = penalties(hout, sched, hinst);
    CHECK(r.water_penalty == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(!r.feasible);
  }
}

TEST_CASE("re-scoring under another snapshot matches a fresh assembly") {
  const ProblemInstance inst = two_plants({11.0});
  RepairOutcome out;
  out.schedule.u = Matrix<std::uint8_t>(2, 1);
  out.schedule.g = Matrix<double>(2, 1);
  out.schedule.hg = Matrix<double>(0, 1);
  out.schedule.hv = Matrix<double>(0, 1);
  out.schedule.u(0, 0) = 1;
  out.schedule.g(0, 0) = 11.0;
  out.supply_residual = {1.5};
  out.water_residual = {};

  PenaltySchedule early;
  early.generation = 10;
  PenaltySchedule late;
  late.generation = 4000;
  const EvaluationReport r_early = penalties(out, early, inst);
  const EvaluationReport r_late = penalties(out, late, inst);
  CHECK(total_under(r_early, late) == doctest::Approx(r_late.total).epsilon(1e-12));
  CHECK(total_under(r_late, early) == doctest::Approx(r_early.total).epsilon(1e-12));
}

TEST_CASE("equal residuals rank by cost at every generation") {
  const ProblemInstance inst = two_plants({11.0});
  auto report_with_cost = [&](double g) {
    RepairOutcome out;
    out.schedule.u = Matrix<std::uint8_t>(2, 1);
    out.schedule.g = Matrix<double>(2, 1);
    out.schedule.hg = Matrix<double>(0, 1);
    out.schedule.hv = Matrix<double>(0, 1);
    out.schedule.u(0, 0) = 1;
    out.schedule.g(0, 0) = g;
    out.supply_residual = {0.7};
    PenaltySchedule sched;
    return penalties(out, sched, inst);
  };
  const EvaluationReport cheap = report_with_cost(11.0);
  const EvaluationReport dear = report_with_cost(11.5);
  for (long gen : {0L, 10L, 1000L, 50000L}) {
    PenaltySchedule sched;
    sched.generation = gen;
    CHECK(total_under(cheap, sched) < total_under(dear, sched));
  }
}
