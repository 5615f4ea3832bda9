#include "ucld/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ucld/rng.hpp"

#include "json.hpp"

namespace ucld {

namespace {

using nlohmann::json;

double get_num(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) {
    throw ParseError(ctx + ": missing field '" + key + "'");
  }
  if (!j[key].is_number()) {
    throw ParseError(ctx + ": field '" + key + "' is not a number");
  }
  return j[key].get<double>();
}

double get_num_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j[key].get<double>() : fallback;
}

// Scalar -> constant series, array -> series (length checked by validate()).
std::vector<double> read_series(const json& j, std::size_t hours,
                                double fallback) {
  if (j.is_null()) return std::vector<double>(hours, fallback);
  if (j.is_number()) return std::vector<double>(hours, j.get<double>());
  return j.get<std::vector<double>>();
}

DemandProfile read_demand_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("demand csv not found: " + path.string());
  DemandProfile d;
  std::string line;
  std::getline(in, line);  // header: t,net_demand,alpha,beta
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 4) {
      throw ParseError("demand csv row needs 4 columns: " + line);
    }
    d.net_demand.push_back(vals[1]);
    d.alpha.push_back(vals[2]);
    d.beta.push_back(vals[3]);
  }
  return d;
}

}  // namespace

DemandProfile DemandProfile::truncated(int hours) const {
  if (hours < 1 || static_cast<std::size_t>(hours) > n_hours()) {
    throw ValidationError("truncation horizon out of range");
  }
  DemandProfile out;
  out.net_demand.assign(net_demand.begin(), net_demand.begin() + hours);
  out.alpha.assign(alpha.begin(), alpha.begin() + hours);
  out.beta.assign(beta.begin(), beta.begin() + hours);
  return out;
}

ProblemInstance ProblemInstance::truncated(int hours) const {
  ProblemInstance out = *this;
  out.demand = demand.truncated(hours);
  out.warnings.clear();
  out.validate();
  return out;
}

void ProblemInstance::validate() {
  if (thermal.empty()) {
    throw ValidationError("instance needs at least one thermal plant");
  }
  for (std::size_t i = 0; i < thermal.size(); ++i) {
    const auto& p = thermal[i];
    const std::string ctx = "thermal[" + std::to_string(i) + "]";
    if (!(p.g_min >= 0.0)) throw ValidationError(ctx + ": g_min < 0");
    if (!(p.g_min <= p.g_max)) throw ValidationError(ctx + ": g_min > g_max");
    if (!(p.ramp_up > 0.0)) throw ValidationError(ctx + ": ramp_up <= 0");
    if (!(p.ramp_down > 0.0)) throw ValidationError(ctx + ": ramp_down <= 0");
    if (p.mdt < 0) throw ValidationError(ctx + ": mdt < 0");
    if (!(p.cost_c >= 0.0)) throw ValidationError(ctx + ": cost_c < 0");
  }
  for (std::size_t j = 0; j < hydro.size(); ++j) {
    const auto& p = hydro[j];
    const std::string ctx = "hydro[" + std::to_string(j) + "]";
    if (!(p.hg_min >= 0.0)) throw ValidationError(ctx + ": hg_min < 0");
    if (!(p.hg_min <= p.hg_max)) throw ValidationError(ctx + ": hg_min > hg_max");
    if (!(p.hp_min >= 0.0)) throw ValidationError(ctx + ": hp_min < 0");
    if (!(p.hp_min <= p.hp_max)) throw ValidationError(ctx + ": hp_min > hp_max");
    if (!(p.hv_min <= p.hv_initial && p.hv_initial <= p.hv_max)) {
      throw ValidationError(ctx + ": hv_initial outside [hv_min, hv_max]");
    }
    if (!(p.epsilon > 0.0)) throw ValidationError(ctx + ": epsilon <= 0");
    if (!(p.eta > 0.0 && p.eta <= 1.0)) {
      throw ValidationError(ctx + ": eta outside (0, 1]");
    }
  }
  const std::size_t hours = demand.net_demand.size();
  if (hours == 0) throw ValidationError("demand: empty net_demand series");
  if (demand.alpha.size() != hours || demand.beta.size() != hours) {
    throw ValidationError("demand: alpha/beta length differs from net_demand");
  }
  for (std::size_t t = 0; t < hours; ++t) {
    if (!(demand.alpha[t] >= 0.0 && demand.alpha[t] <= 1.0)) {
      throw ValidationError("demand: alpha outside [0,1] at t=" +
                            std::to_string(t));
    }
    if (!(demand.beta[t] >= 0.0 && demand.beta[t] <= 1.0)) {
      throw ValidationError("demand: beta outside [0,1] at t=" +
                            std::to_string(t));
    }
  }

  double fleet_max = 0.0;
  for (const auto& p : thermal) fleet_max += p.g_max;
  for (const auto& p : hydro) fleet_max += p.hg_max;
  double required = 0.0;
  for (std::size_t t = 0; t < hours; ++t) {
    required = std::max(required, (1.0 + demand.beta[t]) * demand.net_demand[t]);
  }
  if (fleet_max < required) {
    std::ostringstream w;
    w << "fleet capacity " << fleet_max << " below peak reserve requirement "
      << required << "; instance is unlikely to be solvable";
    warnings.push_back(w.str());
  }
}

DemandProfile synth_demand(int days, double peak, double pv_peak,
                           std::uint64_t seed) {
  if (days < 1) throw ValidationError("synth_demand: days < 1");
  if (!(peak > 0.0)) throw ValidationError("synth_demand: peak <= 0");
  if (pv_peak < 0.0) throw ValidationError("synth_demand: pv_peak < 0");

  Rng rng(seed);
  const int hours = 24 * days;
  DemandProfile d;
  d.net_demand.reserve(hours);
  for (int t = 0; t < hours; ++t) {
    const int day = t / 24;
    const int h = t % 24;
    const bool weekend = (day % 7 == 5) || (day % 7 == 6);
    // Diurnal shape: trough near 04:00, peak near 16:00, values in [0, 1].
    const double s =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * (h - 4) / 24.0));
    double base = 0.40 + 0.55 * s;
    if (weekend) base *= 0.82;
    const double noise = 1.0 + 0.02 * rng.uniform(-1.0, 1.0);
    const double demand = peak * base * noise;
    const double z = (h - 12.0) / 3.5;
    const double pv = pv_peak * std::exp(-z * z);
    d.net_demand.push_back(demand - pv);
  }
  d.alpha.assign(hours, 0.05);
  d.beta.assign(hours, 0.05);
  return d;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("instance file not found: " + path.string());

  json doc;
  try {
    doc = json::parse(in, nullptr, /*allow_exceptions=*/true,
                      /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError("instance parse error: " + std::string(e.what()));
  }

  ProblemInstance inst;
  inst.name = doc.value("name", path.stem().string());
  inst.ramp_aware_reserve = doc.value("ramp_aware_reserve", false);

  if (!doc.contains("thermal") || !doc["thermal"].is_array()) {
    throw ParseError("instance: missing 'thermal' array");
  }
  int next_id = 1;
  for (const auto& row : doc["thermal"]) {
    ThermalPlant p;
    const std::string ctx = "thermal[" + std::to_string(next_id - 1) + "]";
    p.id = static_cast<int>(get_num_or(row, "id", next_id));
    p.g_min = get_num(row, "g_min", ctx);
    p.g_max = get_num(row, "g_max", ctx);
    // Ramps default to g_max: the largest admissible hourly swing, which
    // leaves the constraint non-binding for in-bound outputs.
    p.ramp_up = get_num_or(row, "ramp_up", p.g_max);
    p.ramp_down = get_num_or(row, "ramp_down", p.g_max);
    p.mdt = static_cast<int>(get_num_or(row, "mdt", 0));
    p.min_uptime = static_cast<int>(get_num_or(row, "min_uptime", 0));
    p.startup_cost = get_num_or(row, "startup_cost", 0.0);
    p.cost_a = get_num_or(row, "cost_a", 0.0);
    p.cost_b = get_num_or(row, "cost_b", 0.0);
    p.cost_c = get_num_or(row, "cost_c", 0.0);
    inst.thermal.push_back(p);
    ++next_id;
  }

  next_id = 1;
  if (doc.contains("hydro")) {
    for (const auto& row : doc["hydro"]) {
      PumpedStoragePlant p;
      const std::string ctx = "hydro[" + std::to_string(next_id - 1) + "]";
      p.id = static_cast<int>(get_num_or(row, "id", next_id));
      p.hg_max = get_num(row, "hg_max", ctx);
      p.hp_max = get_num(row, "hp_max", ctx);
      p.hg_min = get_num_or(row, "hg_min", 0.0);
      p.hp_min = get_num_or(row, "hp_min", 0.0);
      p.ramp_gen_up = get_num_or(row, "ramp_gen_up", p.hg_max + p.hp_max);
      p.ramp_pump_down = get_num_or(row, "ramp_pump_down", p.hg_max + p.hp_max);
      p.hv_max = get_num(row, "hv_max", ctx);
      p.hv_min = get_num_or(row, "hv_min", 0.0);
      p.hv_initial = get_num_or(row, "hv_initial", p.hv_max / 2.0);
      p.epsilon = get_num(row, "epsilon", ctx);
      p.eta = get_num(row, "eta", ctx);
      inst.hydro.push_back(p);
      ++next_id;
    }
  }

  if (!doc.contains("demand")) throw ParseError("instance: missing 'demand'");
  const json& dj = doc["demand"];
  if (dj.contains("synth")) {
    const json& s = dj["synth"];
    inst.demand = synth_demand(
        static_cast<int>(get_num(s, "days", "demand.synth")),
        get_num(s, "peak", "demand.synth"), get_num_or(s, "pv_peak", 0.0),
        static_cast<std::uint64_t>(get_num_or(s, "seed", 0.0)));
  } else if (dj.contains("csv")) {
    std::filesystem::path csv = dj["csv"].get<std::string>();
    if (csv.is_relative()) csv = path.parent_path() / csv;
    inst.demand = read_demand_csv(csv);
  } else if (dj.contains("net_demand")) {
    inst.demand.net_demand = dj["net_demand"].get<std::vector<double>>();
  } else {
    throw ParseError("demand: expected 'synth', 'csv' or 'net_demand'");
  }

  const std::size_t hours = inst.demand.net_demand.size();
  if (dj.contains("alpha") || inst.demand.alpha.empty()) {
    inst.demand.alpha =
        read_series(dj.contains("alpha") ? dj["alpha"] : json(), hours, 0.05);
  }
  if (dj.contains("beta") || inst.demand.beta.empty()) {
    inst.demand.beta =
        read_series(dj.contains("beta") ? dj["beta"] : json(), hours, 0.05);
  }

  inst.validate();
  return inst;
}

}  // namespace ucld
