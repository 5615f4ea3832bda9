#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ucld/de_engine.hpp"
#include "ucld/encoding.hpp"
#include "ucld/model.hpp"

namespace ucld {

// Shortest text form that parses back to the exact same double.
std::string format_double(double x);

// Columns: t, u_1..u_NG, g_1..g_NG, hg_1..hg_NHG, hv_1..hv_NHG.
void write_schedule_csv(const std::filesystem::path& path, const Schedule& s,
                        const ProblemInstance& inst);

// Reads u, g and hg back; hv is re-rolled from hg.
Schedule read_schedule_csv(const std::filesystem::path& path,
                           const ProblemInstance& inst);

// Columns: gen, best_total, best_cost, best_penalty, feasible_count.
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TraceRow>& trace);

}  // namespace ucld
