#pragma once

#include <vector>

#include "ucld/matrix.hpp"
#include "ucld/model.hpp"

namespace ucld {

// Flattened genome layout, stable by contract so runs are reproducible:
// thermal output matrix row-major, then pump output matrix row-major, then
// the preference vector, then the max-change gene.
struct GenomeLayout {
  int ng = 0;       // thermal plants
  int nhg = 0;      // pumped-storage plants
  int n_hours = 0;  // time points, t = 0..t_final

  static GenomeLayout of(const ProblemInstance& inst) {
    return {inst.n_thermal(), inst.n_hydro(), inst.n_hours()};
  }

  int dim() const { return (ng + nhg) * n_hours + ng + 1; }
  int thermal_at(int i, int t) const { return i * n_hours + t; }
  int pump_at(int j, int t) const { return ng * n_hours + j * n_hours + t; }
  int pref_at(int i) const { return (ng + nhg) * n_hours + i; }
  int max_change_at() const { return dim() - 1; }

  bool operator==(const GenomeLayout&) const = default;
};

// Pre-repair genotype. Thermal genes are sign-coded outputs (negative = the
// plant is off that hour); pump genes are signed outputs (negative = pumping);
// the preference vector orders the supply-demand repair; the max-change gene
// bounds each repair step.
class Chromosome {
 public:
  Chromosome() = default;
  Chromosome(GenomeLayout layout, std::vector<double> genes);

  const GenomeLayout& layout() const { return layout_; }
  std::vector<double>& genes() { return genes_; }
  const std::vector<double>& genes() const { return genes_; }

  double thermal_gene(int i, int t) const {
    return genes_[layout_.thermal_at(i, t)];
  }
  double pump_gene(int j, int t) const { return genes_[layout_.pump_at(j, t)]; }
  double preference(int i) const { return genes_[layout_.pref_at(i)]; }
  double max_change_gene() const { return genes_[layout_.max_change_at()]; }

  void set_thermal_gene(int i, int t, double v) {
    genes_[layout_.thermal_at(i, t)] = v;
  }
  void set_pump_gene(int j, int t, double v) {
    genes_[layout_.pump_at(j, t)] = v;
  }

  bool operator==(const Chromosome&) const = default;

 private:
  GenomeLayout layout_;
  std::vector<double> genes_;
};

// Post-repair phenotype. u and g cover thermal plants, hg the pumped-storage
// plants (negative = pumping), hv the reservoir levels. hv(j, 0) is the fixed
// initial level; water dynamics run over t = 1..t_final.
struct Schedule {
  Matrix<std::uint8_t> u;
  Matrix<double> g;
  Matrix<double> hg;
  Matrix<double> hv;

  bool operator==(const Schedule&) const = default;
};

// Recomputes hv from hg via epsilon*hv_t = epsilon*hv_{t-1} - eta*hg_t,
// starting from each plant's hv_initial.
void roll_water(Schedule& s, const ProblemInstance& inst);

// Genotype -> phenotype. u = (thermal gene > 0); g copies positive genes;
// hg copies pump genes untouched; hv is rolled from hv_initial.
Schedule decode(const Chromosome& c, const ProblemInstance& inst);

// Maximum per-visit output change for the supply-demand repair:
// max(1, round(|gene|)), a positive integer.
int max_change(const Chromosome& c);

// Thermal plant visit order for the supply-demand repair: indices sorted by
// descending preference value, ties broken by ascending plant index.
std::vector<int> repair_order(const Chromosome& c);

// Phenotype -> genotype. Committed hours carry g; off hours carry a strictly
// negative marker (-g_min, or -1 when g_min is 0); pump genes carry hg.
// Preference vector and max-change gene are taken from `old`.
Chromosome encode_from_schedule(const Schedule& s, const Chromosome& old,
                                const ProblemInstance& inst);

}  // namespace ucld
