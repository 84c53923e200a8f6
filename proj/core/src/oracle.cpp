#include "affproj/oracle.hpp"

#include <algorithm>

namespace affproj {

namespace {

void require_consistent(const StackedConstraints& sc, const Vector& x) {
  const double miss = sc.rows() == 0 ? 0.0 : (sc.c * x - sc.d).norm();
  if (miss > tol::feas * (1.0 + sc.d.norm()) * std::max(1.0, x.norm())) {
    throw InfeasibleError("stacked constraints are inconsistent: residual " +
                          std::to_string(miss));
  }
}

}  // namespace

StackedConstraints stack(std::span<const AffineSet> sets) {
  if (sets.empty()) {
    throw ConfigError("stack: no sets");
  }
  const Eigen::Index dim = sets.front().dim();
  std::vector<RowConstraints> parts;
  Eigen::Index rows = 0;
  for (const auto& s : sets) {
    if (s.dim() != dim) {
      throw DimensionError("stack: sets of differing dimension");
    }
    parts.push_back(s.export_rows());
    rows += parts.back().rows();
    if (rows > kOracleMaxRows) {
      throw UnsupportedOracleError("stack: more than " + std::to_string(kOracleMaxRows) +
                                   " constraint rows");
    }
  }
  StackedConstraints out{Matrix(rows, dim), Vector(rows)};
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.c.middleRows(at, p.rows()) = p.c;
    out.d.segment(at, p.rows()) = p.d;
    at += p.rows();
  }
  return out;
}

Vector direct_projection(const Vector& x0, const StackedConstraints& sc) {
  if (x0.size() != sc.cols()) {
    throw DimensionError("direct_projection: dimension mismatch");
  }
  require_finite(x0, "direct_projection x0");
  if (sc.rows() == 0) {
    return x0;
  }
  Vector out = x0 - lstsq_min_norm(sc.c, sc.c * x0 - sc.d);
  require_consistent(sc, out);
  return out;
}

Vector member_point(const StackedConstraints& sc) {
  Vector out = lstsq_min_norm(sc.c, sc.d);
  require_consistent(sc, out);
  return out;
}

}  // namespace affproj
