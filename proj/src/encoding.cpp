#include "ucld/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ucld {

Chromosome::Chromosome(GenomeLayout layout, std::vector<double> genes)
    : layout_(layout), genes_(std::move(genes)) {
  if (static_cast<int>(genes_.size()) != layout_.dim()) {
    throw std::invalid_argument("chromosome gene count does not match layout");
  }
  for (double g : genes_) {
    if (!std::isfinite(g)) {
      throw std::invalid_argument("chromosome contains a non-finite gene");
    }
  }
}

void roll_water(Schedule& s, const ProblemInstance& inst) {
  const int hours = inst.n_hours();
  for (int j = 0; j < inst.n_hydro(); ++j) {
    const auto& p = inst.hydro[j];
    s.hv(j, 0) = p.hv_initial;
    for (int t = 1; t < hours; ++t) {
      s.hv(j, t) = s.hv(j, t - 1) + p.level_delta(s.hg(j, t));
    }
  }
}

Schedule decode(const Chromosome& c, const ProblemInstance& inst) {
  if (c.layout() != GenomeLayout::of(inst)) {
    throw std::invalid_argument("chromosome dimensions do not match instance");
  }
  const int ng = inst.n_thermal();
  const int nhg = inst.n_hydro();
  const int hours = inst.n_hours();

  Schedule s;
  s.u = Matrix<std::uint8_t>(ng, hours);
  s.g = Matrix<double>(ng, hours);
  s.hg = Matrix<double>(nhg, hours);
  s.hv = Matrix<double>(nhg, hours);

  for (int i = 0; i < ng; ++i) {
    for (int t = 0; t < hours; ++t) {
      const double gene = c.thermal_gene(i, t);
      if (gene > 0.0) {
        s.u(i, t) = 1;
        s.g(i, t) = gene;
      }
    }
  }
  for (int j = 0; j < nhg; ++j) {
    for (int t = 0; t < hours; ++t) s.hg(j, t) = c.pump_gene(j, t);
  }
  roll_water(s, inst);
  return s;
}

int max_change(const Chromosome& c) {
  const double rounded = std::round(std::fabs(c.max_change_gene()));
  return std::max(1, static_cast<int>(rounded));
}

std::vector<int> repair_order(const Chromosome& c) {
  std::vector<int> order(c.layout().ng);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return c.preference(a) > c.preference(b);
  });
  return order;
}

Chromosome encode_from_schedule(const Schedule& s, const Chromosome& old,
                                const ProblemInstance& inst) {
  if (old.layout() != GenomeLayout::of(inst)) {
    throw std::invalid_argument("chromosome dimensions do not match instance");
  }
  const GenomeLayout& layout = old.layout();
  if (static_cast<int>(s.u.rows()) != layout.ng ||
      static_cast<int>(s.u.cols()) != layout.n_hours ||
      static_cast<int>(s.hg.rows()) != layout.nhg) {
    throw std::invalid_argument("schedule dimensions do not match instance");
  }

  std::vector<double> genes = old.genes();
  for (int i = 0; i < layout.ng; ++i) {
    const double off_marker =
        inst.thermal[i].g_min > 0.0 ? -inst.thermal[i].g_min : -1.0;
    for (int t = 0; t < layout.n_hours; ++t) {
      genes[layout.thermal_at(i, t)] = s.u(i, t) ? s.g(i, t) : off_marker;
    }
  }
  for (int j = 0; j < layout.nhg; ++j) {
    for (int t = 0; t < layout.n_hours; ++t) {
      genes[layout.pump_at(j, t)] = s.hg(j, t);
    }
  }
  return Chromosome(layout, std::move(genes));
}

}  // namespace ucld
