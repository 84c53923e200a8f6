#pragma once

#include <span>

#include "affproj/affine_sets.hpp"

namespace affproj {

// Row constraints of every set stacked into one system whose solution set is
// the intersection M.
using StackedConstraints = RowConstraints;

inline constexpr Eigen::Index kOracleMaxRows = 5000;

// Throws UnsupportedOracleError if a set has no row export or the stack
// exceeds kOracleMaxRows.
StackedConstraints stack(std::span<const AffineSet> sets);

// P_M(x0) = x0 - C^+ (C x0 - d). Throws InfeasibleError when the stacked
// system is inconsistent.
Vector direct_projection(const Vector& x0, const StackedConstraints& sc);

// Any point of M (the min-norm solution of C x = d).
Vector member_point(const StackedConstraints& sc);

}  // namespace affproj
