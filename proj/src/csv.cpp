#include "ucld/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ucld {

std::string format_double(double x) {
  char buf[40];
  // Shortest precision that round-trips; %.17g always does.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void write_schedule_csv(const std::filesystem::path& path, const Schedule& s,
                        const ProblemInstance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t";
  for (int i = 1; i <= inst.n_thermal(); ++i) out << ",u_" << i;
  for (int i = 1; i <= inst.n_thermal(); ++i) out << ",g_" << i;
  for (int j = 1; j <= inst.n_hydro(); ++j) out << ",hg_" << j;
  for (int j = 1; j <= inst.n_hydro(); ++j) out << ",hv_" << j;
  out << "\n";
  for (int t = 0; t < inst.n_hours(); ++t) {
    out << t;
    for (int i = 0; i < inst.n_thermal(); ++i) out << ',' << int(s.u(i, t));
    for (int i = 0; i < inst.n_thermal(); ++i) {
      out << ',' << format_double(s.g(i, t));
    }
    for (int j = 0; j < inst.n_hydro(); ++j) {
      out << ',' << format_double(s.hg(j, t));
    }
    for (int j = 0; j < inst.n_hydro(); ++j) {
      out << ',' << format_double(s.hv(j, t));
    }
    out << "\n";
  }
}

Schedule read_schedule_csv(const std::filesystem::path& path,
                           const ProblemInstance& inst) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const int ng = inst.n_thermal();
  const int nhg = inst.n_hydro();
  const int hours = inst.n_hours();

  Schedule s;
  s.u = Matrix<std::uint8_t>(ng, hours);
  s.g = Matrix<double>(ng, hours);
  s.hg = Matrix<double>(nhg, hours);
  s.hv = Matrix<double>(nhg, hours);

  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    const std::size_t expected = 1 + 2 * ng + 2 * nhg;
    if (cells.size() != expected) {
      throw std::runtime_error("schedule csv: wrong column count in " + line);
    }
    const int t = std::atoi(cells[0].c_str());
    if (t < 0 || t >= hours) {
      throw std::runtime_error("schedule csv: hour out of range");
    }
    int k = 1;
    for (int i = 0; i < ng; ++i) {
      s.u(i, t) = static_cast<std::uint8_t>(std::atoi(cells[k++].c_str()));
    }
    for (int i = 0; i < ng; ++i) {
      s.g(i, t) = std::strtod(cells[k++].c_str(), nullptr);
    }
    for (int j = 0; j < nhg; ++j) {
      s.hg(j, t) = std::strtod(cells[k++].c_str(), nullptr);
    }
    ++rows;
  }
  if (rows != hours) {
    throw std::runtime_error("schedule csv: row count does not match horizon");
  }
  roll_water(s, inst);
  return s;
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "gen,best_total,best_cost,best_penalty,feasible_count\n";
  for (const auto& row : trace) {
    out << row.generation << ',' << format_double(row.best_total) << ','
        << format_double(row.best_cost) << ','
        << format_double(row.best_penalty) << ',' << row.feasible_count
        << "\n";
  }
}

}  // namespace ucld
