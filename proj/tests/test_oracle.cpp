#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "ucld/constraints.hpp"
#include "ucld/oracle.hpp"

using namespace ucld;
using namespace ucld::test;

TEST_CASE("dispatch_qp") {
  SUBCASE("single plant takes the whole demand") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 1, 11, 11, 11, 0, 0, 0.5, 1.0, 0.05)};
    const DispatchResult r = dispatch_qp({0}, 7.3, plants);
    CHECK(r.g[0] == doctest::Approx(7.3).epsilon(1e-10));
    CHECK(r.cost == doctest::Approx(plants[0].fuel_cost(7.3)).epsilon(1e-10));
  }
  SUBCASE("two identical plants split evenly") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 0, 10, 10, 10, 0, 0, 0.2, 1.0, 0.05),
        make_thermal(2, 0, 10, 10, 10, 0, 0, 0.2, 1.0, 0.05)};
    const DispatchResult r = dispatch_qp({0, 1}, 8.0, plants);
    CHECK(r.g[0] == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(r.g[1] == doctest::Approx(4.0).epsilon(1e-8));
  }
  SUBCASE("cheap-steep versus dear-flat pair hits a corner at low demand") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 0, 30, 30, 30, 0, 0, 0.0, 0.5, 0.01),
        make_thermal(2, 0, 30, 30, 30, 0, 0, 0.0, 2.4, 0.04)};
    const DispatchResult r = dispatch_qp({0, 1}, 10.0, plants);
    CHECK(r.g[0] == doctest::Approx(10.0).epsilon(1e-8));
    CHECK(r.g[1] == doctest::Approx(0.0).epsilon(1e-8));
    // Clamped-at-minimum plant carries a marginal cost above the shared one.
    CHECK(plants[1].marginal_cost(r.g[1]) >=
          plants[0].marginal_cost(r.g[0]) - 1e-6);
  }
  SUBCASE("interior optimum equalizes marginal costs") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 0, 120, 120, 120, 0, 0, 0.0, 0.5, 0.01),
        make_thermal(2, 0, 120, 120, 120, 0, 0, 0.0, 2.4, 0.04)};
    const DispatchResult r = dispatch_qp({0, 1}, 100.0, plants);
    CHECK(r.g[0] == doctest::Approx(99.0).epsilon(1e-7));
    CHECK(r.g[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::fabs(plants[0].marginal_cost(r.g[0]) -
                    plants[1].marginal_cost(r.g[1])) <= 1e-6);
  }
  SUBCASE("linear plants dispatch greedily by slope") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 0, 5, 5, 5, 0, 0, 0.0, 1.0, 0.0),
        make_thermal(2, 0, 5, 5, 5, 0, 0, 0.0, 2.0, 0.0)};
    const DispatchResult r = dispatch_qp({0, 1}, 7.0, plants);
    CHECK(r.g[0] == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(r.g[1] == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("mixed linear and quadratic") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 0, 6, 6, 6, 0, 0, 0.0, 1.0, 0.0),
        make_thermal(2, 0, 6, 6, 6, 0, 0, 0.0, 0.5, 0.25)};
    // Quadratic marginal 0.5 + 0.5 g crosses the linear slope 1 at g = 1.
    const DispatchResult r = dispatch_qp({0, 1}, 4.0, plants);
    CHECK(r.g[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.g[0] == doctest::Approx(3.0).epsilon(1e-6));
  }
  SUBCASE("errors") {
    const std::vector<ThermalPlant> plants{
        make_thermal(1, 1, 5, 5, 5, 0, 0, 0.0, 1.0, 0.1)};
    CHECK_THROWS_AS(dispatch_qp({0}, 6.0, plants), OracleInfeasible);
    CHECK_THROWS_AS(dispatch_qp({0}, 0.5, plants), OracleInfeasible);
    CHECK_THROWS_AS(dispatch_qp({}, 1.0, plants), OracleInfeasible);
    CHECK_NOTHROW(dispatch_qp({}, 0.0, plants));
  }
  SUBCASE("random problems balance and satisfy stationarity") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + rng.uniform_int(3);
      std::vector<ThermalPlant> plants;
      std::vector<int> committed;
      double sum_min = 0.0;
      double sum_max = 0.0;
      for (int i = 0; i < n; ++i) {
        const double lo = rng.uniform(0.0, 2.0);
        const double hi = lo + rng.uniform(1.0, 8.0);
        plants.push_back(make_thermal(i + 1, lo, hi, hi, hi, 0, 0,
                                      rng.uniform(0.0, 2.0),
                                      rng.uniform(0.5, 5.0),
                                      rng.uniform(0.0, 0.5)));
        committed.push_back(i);
        sum_min += lo;
        sum_max += hi;
      }
      const double d = rng.uniform(sum_min, sum_max);
      const DispatchResult r = dispatch_qp(committed, d, plants);
      double sum = 0.0;
      for (int i : committed) sum += r.g[i];
      CHECK(std::fabs(sum - d) <= 1e-8);
      // Unclamped plants share one marginal cost.
      for (int i : committed) {
        for (int k : committed) {
          const auto& a = plants[i];
          const auto& b = plants[k];
          const bool a_free = r.g[i] > a.g_min + 1e-9 && r.g[i] < a.g_max - 1e-9;
          const bool b_free = r.g[k] > b.g_min + 1e-9 && r.g[k] < b.g_max - 1e-9;
          if (a_free && b_free) {
            CHECK(std::fabs(a.marginal_cost(r.g[i]) -
                            b.marginal_cost(r.g[k])) <= 1e-6);
          }
        }
      }
    }
  }
}

TEST_CASE("enumerate_uc") {
  SUBCASE("forced commitment of a single plant") {
    const ProblemInstance inst = make_instance(
        {make_thermal(1, 1, 5, 5, 5, 1, 0.4, 0.5, 1.0, 0.05)}, {},
        {3.0, 4.0}, 0.0, 0.0);
    const OracleResult r = enumerate_uc(inst);
    CHECK(r.schedule.u(0, 0) == 1);
    CHECK(r.schedule.u(0, 1) == 1);
    const double expected =
        inst.thermal[0].fuel_cost(3.0) + inst.thermal[0].fuel_cost(4.0);
    CHECK(r.cost == doctest::Approx(expected).epsilon(1e-9));
  }
  SUBCASE("demand above fleet capacity is infeasible") {
    const ProblemInstance inst = make_instance(
        {make_thermal(1, 1, 5, 5, 5, 1, 0.4, 0.5, 1.0, 0.05)}, {},
        {3.0, 9.0}, 0.0, 0.0);
    CHECK_THROWS_AS(enumerate_uc(inst), OracleInfeasible);
  }
  SUBCASE("minimum downtime can forbid a profitable restart") {
    const ProblemInstance feasible = make_instance(
        {make_thermal(1, 1, 5, 5, 5, 1, 0.4, 0.5, 1.0, 0.05)}, {},
        {2.0, 0.0, 2.0}, 0.0, 0.0);
    const OracleResult r = enumerate_uc(feasible);
    CHECK(r.schedule.u(0, 1) == 0);
    CHECK(r.cost == doctest::Approx(2 * feasible.thermal[0].fuel_cost(2.0) +
                                    0.4)
                        .epsilon(1e-9));

    ProblemInstance blocked = feasible;
    blocked.thermal[0].mdt = 3;
    CHECK_THROWS_AS(enumerate_uc(blocked), OracleInfeasible);
  }
  SUBCASE("tiny node budget trips the guard") {
    const ProblemInstance inst = load_instance(data_path("tiny2.inst"));
    CHECK_THROWS_AS(enumerate_uc(inst, -1, 5), OracleBudgetExceeded);
  }
  SUBCASE("startup costs steer the commitment plan") {
    // Second plant is cheaper to run but expensive to start twice.
    const ProblemInstance inst = load_instance(data_path("tiny2.inst"));
    const OracleResult r = enumerate_uc(inst);
    CHECK(check_all(r.schedule, inst).supply_demand <= 1e-6);
    // Peak hour needs both plants: 7 > g_max of either one.
    CHECK(r.schedule.u(0, 3) == 1);
    CHECK(r.schedule.u(1, 3) == 1);
  }
}

TEST_CASE("brute_force_grid") {
  SUBCASE("agrees with enumerate_uc when the optimum is on the grid") {
    const ProblemInstance inst = make_instance(
        {make_thermal(1, 1, 5, 5, 5, 1, 0.4, 0.5, 1.0, 0.05)}, {},
        {2.0, 3.0}, 0.0, 0.0);
    const OracleResult exact = enumerate_uc(inst);
    const OracleResult grid = brute_force_grid(inst, -1, 0.25);
    CHECK(grid.cost == doctest::Approx(exact.cost).epsilon(1e-9));
  }
  SUBCASE("refining the grid never worsens the best cost") {
    const ProblemInstance inst = load_instance(data_path("tinyhydro.inst"));
    const OracleResult coarse = brute_force_grid(inst, -1, 0.5);
    const OracleResult fine = brute_force_grid(inst, -1, 0.25);
    CHECK(fine.cost <= coarse.cost + 1e-12);
  }
  SUBCASE("stored energy beats all-thermal on the tiny hydro instance") {
    const ProblemInstance inst = load_instance(data_path("tinyhydro.inst"));
    const OracleResult r = brute_force_grid(inst, -1, 0.25);
    CHECK(check_all(r.schedule, inst).feasible());
    // The negative net-demand hour is absorbed by pumping.
    CHECK(r.schedule.hg(0, 1) < 0.0);
    // Thermal stays online through the negative hour, storing cheap energy.
    CHECK(r.cost == doctest::Approx(23.875).epsilon(1e-9));
  }
  SUBCASE("node budget guard") {
    const ProblemInstance inst = load_instance(data_path("tinyhydro.inst"));
    CHECK_THROWS_AS(brute_force_grid(inst, -1, 0.25, 10), OracleBudgetExceeded);
  }
}
