#include "affproj/random_family.hpp"

#include <numeric>
#include <random>

namespace affproj {

RandomFamily make_random_family(const RandomFamilySpec& spec) {
  if (spec.dim < 2) {
    throw ConfigError("random family: dim must be at least 2");
  }
  if (spec.k == 0) {
    throw ConfigError("random family: k must be positive");
  }
  std::vector<Eigen::Index> codims = spec.codims;
  if (codims.empty()) {
    codims.assign(spec.k, std::max<Eigen::Index>(
                              1, spec.dim / static_cast<Eigen::Index>(2 * spec.k)));
  }
  if (codims.size() != spec.k) {
    throw ConfigError("random family: expected " + std::to_string(spec.k) + " codimensions");
  }
  const auto total = std::accumulate(codims.begin(), codims.end(), Eigen::Index{0});
  if (total > spec.dim - 1) {
    throw ConfigError("random family: total codimension " + std::to_string(total) +
                      " exceeds dim - 1");
  }
  for (auto c : codims) {
    if (c < 1) {
      throw ConfigError("random family: codimensions must be positive");
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        m(i, j) = normal(rng);
      }
    }
    return m;
  };

  RandomFamily out;
  out.anchor = spec.linear ? Vector::Zero(spec.dim) : Vector(gaussian(spec.dim, 1).col(0));
  for (std::size_t l = 0; l < spec.k; ++l) {
    Matrix c = gaussian(codims[l], spec.dim);
    Vector d = c * out.anchor;
    out.sets.push_back(AffineSet::row_constraint(std::move(c), std::move(d),
                                                 "M" + std::to_string(l)));
  }
  out.x0 = out.anchor + 3.0 * Vector(gaussian(spec.dim, 1).col(0));
  return out;
}

}  // namespace affproj
