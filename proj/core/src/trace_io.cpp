#include "affproj/trace_io.hpp"

#include <cstdio>
#include <ostream>

namespace affproj {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string trace_csv_header(std::size_t set_count) {
  std::string h = "iter,phase,set_index,step_norm,residual_max";
  for (std::size_t l = 0; l < set_count; ++l) {
    h += ",residual_" + std::to_string(l);
  }
  h += ",dist_oracle";
  return h;
}

void write_trace_csv(std::ostream& out, const SolveResult& result, std::size_t set_count) {
  out << trace_csv_header(set_count) << '\n';
  for (const auto& rec : result.trace) {
    out << rec.index << ',' << to_string(rec.phase) << ',';
    if (rec.set_index) {
      out << *rec.set_index;
    }
    out << ',' << format_double(rec.step_norm) << ',';
    if (!rec.per_set_residuals.empty()) {
      out << format_double(rec.residual_max());
    }
    for (std::size_t l = 0; l < set_count; ++l) {
      out << ',';
      if (l < rec.per_set_residuals.size()) {
        out << format_double(rec.per_set_residuals[l]);
      }
    }
    out << ',';
    if (rec.distance_to_oracle) {
      out << format_double(*rec.distance_to_oracle);
    }
    out << '\n';
  }
}

}  // namespace affproj
