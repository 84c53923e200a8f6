#include "affproj/affine_sets.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace affproj {

namespace {

void check_dim(const Vector& x, Eigen::Index dim, const char* where) {
  if (x.size() != dim) {
    throw DimensionError(std::string(where) + ": expected dimension " + std::to_string(dim) +
                         ", got " + std::to_string(x.size()));
  }
}

double feasibility_scale(const Vector& d) { return 1.0 + d.norm(); }

struct RowImpl {
  Matrix c;
  Vector d;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  bool trivial = false;

  Vector project(const Vector& x) const {
    check_dim(x, c.cols(), "row-constraint projection");
    if (trivial) {
      if (d.size() > 0 && d.norm() > tol::feas) {
        throw InfeasibleError("row-constraint set is empty (0 = d with d != 0)");
      }
      return x;
    }
    const Vector r = c * x - d;
    Vector out = x - cod.solve(r);
    const double miss = (c * out - d).norm();
    if (miss > tol::feas * feasibility_scale(d) * std::max(1.0, x.norm())) {
      throw InfeasibleError("row-constraint set is empty: residual " + std::to_string(miss));
    }
    return out;
  }
};

struct HyperplaneImpl {
  Hyperplane h;
};

struct CustomImpl {
  Eigen::Index dim;
  AffineSet::Projector projector;
  AffineSet::RowExporter rows;
  AffineSet::Residual residual;
};

}  // namespace

struct AffineSet::Impl {
  std::string name;
  std::variant<RowImpl, HyperplaneImpl, CustomImpl> body;
};

Vector project_hyperplane(const Vector& x, const Hyperplane& h) {
  if (h.normal.size() != x.size()) {
    throw DimensionError("project_hyperplane: dimension mismatch");
  }
  const double nn = h.normal.squaredNorm();
  if (nn == 0.0) {
    return x;
  }
  return x + ((h.offset - h.normal.dot(x)) / nn) * h.normal;
}

Vector project_row_constraint(const Vector& x, const Matrix& c, const Vector& d) {
  if (c.cols() != x.size() || c.rows() != d.size()) {
    throw DimensionError("project_row_constraint: dimension mismatch");
  }
  // C^T (C C^T)^+ r equals C^+ r; solving against C directly avoids squaring
  // the condition number.
  const Vector r = c * x - d;
  Vector out = x - lstsq_min_norm(c, r);
  const double miss = (c * out - d).norm();
  if (miss > tol::feas * feasibility_scale(d) * std::max(1.0, x.norm())) {
    throw InfeasibleError("project_row_constraint: inconsistent system, residual " +
                          std::to_string(miss));
  }
  return out;
}

IntersectionProjection solve_hyperplane_intersection(const Vector& x,
                                                     std::span<const Hyperplane> hs) {
  IntersectionProjection out{x, Vector::Zero(static_cast<Eigen::Index>(hs.size()))};
  std::vector<Vector> units;
  std::vector<double> norms;
  std::vector<std::size_t> active;
  std::vector<double> rhs;
  for (std::size_t j = 0; j < hs.size(); ++j) {
    const auto& h = hs[j];
    if (h.normal.size() != x.size()) {
      throw DimensionError("project_hyperplane_intersection: dimension mismatch");
    }
    const double n = h.normal.norm();
    if (n == 0.0) {
      continue;
    }
    units.push_back(h.normal / n);
    norms.push_back(n);
    active.push_back(j);
    rhs.push_back((h.offset - h.normal.dot(x)) / n);
  }
  if (active.empty()) {
    return out;
  }
  // Rows are equilibrated so a tiny but genuine normal is not mistaken for
  // numerical rank deficiency next to large ones.
  const Vector r = Eigen::Map<const Vector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  const Vector mu = gram_solve(units, r);
  for (std::size_t t = 0; t < active.size(); ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    out.point += mu(ti) * units[t];
    out.lambda(static_cast<Eigen::Index>(active[t])) = mu(ti) / norms[t];
  }
  const double scale = std::max(1.0, x.norm());
  for (std::size_t t = 0; t < active.size(); ++t) {
    const auto& h = hs[active[t]];
    const double miss = std::abs(units[t].dot(out.point) - h.offset / norms[t]);
    if (miss > tol::feas * scale) {
      throw InfeasibleError("hyperplane intersection is empty: distance " + std::to_string(miss) +
                            " to hyperplane " + std::to_string(active[t]));
    }
  }
  return out;
}

Vector project_hyperplane_intersection(const Vector& x, std::span<const Hyperplane> hs) {
  return solve_hyperplane_intersection(x, hs).point;
}

AffineSet AffineSet::row_constraint(Matrix c, Vector d, std::string name) {
  if (c.rows() != d.size()) {
    throw DimensionError("row_constraint: C rows differ from d length");
  }
  if (c.cols() == 0) {
    throw DimensionError("row_constraint: zero-dimensional space");
  }
  require_finite(c, "row_constraint C");
  require_finite(d, "row_constraint d");
  RowImpl body;
  body.trivial = c.rows() == 0 || c.cwiseAbs().maxCoeff() == 0.0;
  if (!body.trivial) {
    body.cod.setThreshold(tol::rank);
    body.cod.compute(c);
  }
  body.c = std::move(c);
  body.d = std::move(d);
  // Reject Cx = d without a solution up front.
  if (body.trivial) {
    if (body.d.size() > 0 && body.d.norm() > tol::feas) {
      throw InfeasibleError("row_constraint: 0 = d with d != 0");
    }
  } else {
    const Vector x = body.cod.solve(body.d);
    const double miss = (body.c * x - body.d).norm();
    if (miss > tol::feas * feasibility_scale(body.d)) {
      throw InfeasibleError("row_constraint: inconsistent system, residual " +
                            std::to_string(miss));
    }
  }
  return AffineSet(std::make_shared<const Impl>(Impl{std::move(name), std::move(body)}));
}

AffineSet AffineSet::hyperplane(Hyperplane h, std::string name) {
  require_finite(h.normal, "hyperplane normal");
  if (h.normal.size() == 0) {
    throw DimensionError("hyperplane: zero-dimensional normal");
  }
  if (h.is_whole_space() && h.offset != 0.0) {
    throw InfeasibleError("hyperplane with zero normal and nonzero offset is empty");
  }
  return AffineSet(
      std::make_shared<const Impl>(Impl{std::move(name), HyperplaneImpl{std::move(h)}}));
}

AffineSet AffineSet::custom(Eigen::Index dim, Projector projector, std::string name,
                            RowExporter rows, Residual residual) {
  if (dim <= 0) {
    throw DimensionError("custom set: dimension must be positive");
  }
  if (!projector) {
    throw ConfigError("custom set: projector is required");
  }
  return AffineSet(std::make_shared<const Impl>(
      Impl{std::move(name),
           CustomImpl{dim, std::move(projector), std::move(rows), std::move(residual)}}));
}

Vector AffineSet::project(const Vector& x) const {
  return std::visit(
      [&](const auto& body) -> Vector {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, RowImpl>) {
          return body.project(x);
        } else if constexpr (std::is_same_v<T, HyperplaneImpl>) {
          return project_hyperplane(x, body.h);
        } else {
          check_dim(x, body.dim, "custom projection");
          return body.projector(x);
        }
      },
      impl_->body);
}

double AffineSet::residual(const Vector& x) const {
  if (const auto* custom = std::get_if<CustomImpl>(&impl_->body); custom && custom->residual) {
    check_dim(x, custom->dim, "custom residual");
    return custom->residual(x);
  }
  return (x - project(x)).norm();
}

Eigen::Index AffineSet::dim() const {
  return std::visit(
      [](const auto& body) -> Eigen::Index {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, RowImpl>) {
          return body.c.cols();
        } else if constexpr (std::is_same_v<T, HyperplaneImpl>) {
          return body.h.normal.size();
        } else {
          return body.dim;
        }
      },
      impl_->body);
}

const std::string& AffineSet::name() const { return impl_->name; }

bool AffineSet::has_row_export() const {
  if (const auto* custom = std::get_if<CustomImpl>(&impl_->body)) {
    return static_cast<bool>(custom->rows);
  }
  return true;
}

RowConstraints AffineSet::export_rows() const {
  return std::visit(
      [&](const auto& body) -> RowConstraints {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, RowImpl>) {
          return {body.c, body.d};
        } else if constexpr (std::is_same_v<T, HyperplaneImpl>) {
          if (body.h.is_whole_space()) {
            return {Matrix(0, body.h.normal.size()), Vector(0)};
          }
          return {body.h.normal.transpose(), Vector::Constant(1, body.h.offset)};
        } else {
          if (!body.rows) {
            throw UnsupportedOracleError("set '" + impl_->name + "' has no row-constraint export");
          }
          return body.rows();
        }
      },
      impl_->body);
}

double residual(const AffineSet& set, const Vector& x) { return set.residual(x); }

}  // namespace affproj
