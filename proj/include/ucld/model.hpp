#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucld {

// Raised when an instance file cannot be parsed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a parsed instance violates a type invariant. The message names
// the first violated invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ThermalPlant {
  int id = 0;
  double g_min = 0.0;        // minimum output when committed [p.u.]
  double g_max = 0.0;        // maximum output [p.u.]
  double ramp_up = 0.0;      // max hourly output increase [p.u./h]
  double ramp_down = 0.0;    // max hourly output decrease [p.u./h]
  int mdt = 0;               // minimum downtime [h]
  double startup_cost = 0.0;
  double cost_a = 0.0;       // fuel cost = a + b*g + c*g^2
  double cost_b = 0.0;
  double cost_c = 0.0;
  int min_uptime = 0;        // present in instance data, not constrained

  double fuel_cost(double g) const { return cost_a + g * (cost_b + cost_c * g); }
  double marginal_cost(double g) const { return cost_b + 2.0 * cost_c * g; }
};

struct PumpedStoragePlant {
  int id = 0;
  double hg_min = 0.0;          // min generating output when generating [p.u.]
  double hg_max = 0.0;          // max generating output [p.u.]
  double hp_min = 0.0;          // min pumping draw when pumping [p.u.]
  double hp_max = 0.0;          // max pumping draw [p.u.]
  double ramp_gen_up = 0.0;     // max hourly generation increase [p.u./h]
  double ramp_pump_down = 0.0;  // max hourly pumping-draw increase [p.u./h]
  double hv_min = 0.0;          // reservoir level bounds [level units]
  double hv_max = 0.0;
  double hv_initial = 0.0;
  double epsilon = 0.0;         // level-to-energy conversion [p.u.h per level]
  double eta = 0.0;             // round-trip efficiency coefficient, (0, 1]

  // Level change over one hour at plant output hg (negative hg = pumping).
  double level_delta(double hg) const { return -(eta * hg) / epsilon; }
};

// Hourly net demand (demand minus PV) plus reserve margins. Time points run
// t = 0..t_final, i.e. n_hours() = t_final + 1 values per series.
struct DemandProfile {
  std::vector<double> net_demand;
  std::vector<double> alpha;  // max fractional decrease of net demand, [0,1]
  std::vector<double> beta;   // max fractional increase of net demand, [0,1]

  int t_final() const { return static_cast<int>(net_demand.size()) - 1; }
  std::size_t n_hours() const { return net_demand.size(); }

  // First `hours` points of the profile.
  DemandProfile truncated(int hours) const;
};

struct ProblemInstance {
  std::string name;
  std::vector<ThermalPlant> thermal;
  std::vector<PumpedStoragePlant> hydro;
  DemandProfile demand;
  // When set, spinning-reserve capabilities are tightened by the thermal
  // ramp windows instead of using the static plant bounds.
  bool ramp_aware_reserve = false;
  // Solvability and other non-fatal findings from load/validate.
  std::vector<std::string> warnings;

  int n_thermal() const { return static_cast<int>(thermal.size()); }
  int n_hydro() const { return static_cast<int>(hydro.size()); }
  int n_hours() const { return static_cast<int>(demand.n_hours()); }

  // Throws ValidationError naming the first violated invariant; fills
  // warnings for non-fatal findings.
  void validate();

  // Copy of this instance with the demand profile truncated to `hours`.
  ProblemInstance truncated(int hours) const;
};

// Loads and validates an instance file (JSON document, see README for the
// schema). Demand may be inline series, a CSV path, or synthesis parameters.
ProblemInstance load_instance(const std::filesystem::path& path);

// Deterministic synthetic hourly profile: diurnal sinusoid with reduced
// weekend amplitude and a midday PV bell subtracted. alpha = beta = 0.05.
DemandProfile synth_demand(int days, double peak, double pv_peak,
                           std::uint64_t seed);

}  // namespace ucld
