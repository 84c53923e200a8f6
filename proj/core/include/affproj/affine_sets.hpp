#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affproj/linalg.hpp"

namespace affproj {

// {x : <normal, x> = offset}. A zero normal (with zero offset) is the whole space.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  bool is_whole_space() const { return normal.size() == 0 || normal.squaredNorm() == 0.0; }
};

// The linear system C x = d describing an affine set.
struct RowConstraints {
  Matrix c;
  Vector d;

  Eigen::Index rows() const { return c.rows(); }
  Eigen::Index cols() const { return c.cols(); }
};

Vector project_hyperplane(const Vector& x, const Hyperplane& h);

// Projection onto {x : C x = d}; throws InfeasibleError for inconsistent systems.
Vector project_row_constraint(const Vector& x, const Matrix& c, const Vector& d);

struct IntersectionProjection {
  Vector point;
  // One coefficient per input hyperplane, point = x + sum_j lambda_j a_j.
  // Whole-space entries carry a zero coefficient.
  Vector lambda;
};

// Projection onto the intersection of the given hyperplanes. Whole-space
// entries are skipped; redundant families are handled by min-norm least
// squares. Throws InfeasibleError when the family has no common point.
IntersectionProjection solve_hyperplane_intersection(const Vector& x,
                                                     std::span<const Hyperplane> hs);
Vector project_hyperplane_intersection(const Vector& x, std::span<const Hyperplane> hs);

// A closed affine subspace with an exact projector. Immutable and cheap to
// copy; copies share the underlying description.
class AffineSet {
 public:
  using Projector = std::function<Vector(const Vector&)>;
  using Residual = std::function<double(const Vector&)>;
  using RowExporter = std::function<RowConstraints()>;

  static AffineSet row_constraint(Matrix c, Vector d, std::string name = "rows");
  static AffineSet hyperplane(Hyperplane h, std::string name = "hyperplane");
  // `residual` defaults to ||x - project(x)||. `rows` enables the oracle.
  static AffineSet custom(Eigen::Index dim, Projector projector, std::string name,
                          RowExporter rows = {}, Residual residual = {});

  Vector project(const Vector& x) const;
  double residual(const Vector& x) const;
  Eigen::Index dim() const;
  const std::string& name() const;

  bool has_row_export() const;
  // Throws UnsupportedOracleError for custom sets without a row export.
  RowConstraints export_rows() const;

  struct Impl;

 private:
  explicit AffineSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double residual(const AffineSet& set, const Vector& x);

}  // namespace affproj
