#pragma once

#include <cstdint>
#include <vector>

#include "affproj/affine_sets.hpp"

namespace affproj {

struct RandomFamilySpec {
  Eigen::Index dim = 10;
  std::size_t k = 3;
  // Per-set codimensions; empty means max(1, dim / (2k)) for every set.
  std::vector<Eigen::Index> codims;
  std::uint64_t seed = 1;
  // Sets through the origin (linear subspaces) instead of translated ones.
  bool linear = false;
};

struct RandomFamily {
  std::vector<AffineSet> sets;
  Vector x0;
  // A point common to all sets.
  Vector anchor;
};

// Gaussian row-constraint sets sharing a random anchor point, so the
// intersection is nonempty. Total codimension must be at most dim - 1.
RandomFamily make_random_family(const RandomFamilySpec& spec);

}  // namespace affproj
