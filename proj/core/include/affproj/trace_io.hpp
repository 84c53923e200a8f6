#pragma once

#include <iosfwd>
#include <string>

#include "affproj/solver.hpp"

namespace affproj {

// Header: iter,phase,set_index,step_norm,residual_max,residual_0..residual_{k-1},dist_oracle
std::string trace_csv_header(std::size_t set_count);

// Writes the header and one row per record. Doubles use 17 significant
// digits so equal runs produce identical bytes.
void write_trace_csv(std::ostream& out, const SolveResult& result, std::size_t set_count);

std::string format_double(double value);

}  // namespace affproj
