#include "affproj/linalg.hpp"

#include <string>

namespace affproj {

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite entry");
  }
}

double inner(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("inner: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  return x.dot(y);
}

Vector lstsq_min_norm(const Matrix& c, const Vector& d) {
  if (c.rows() != d.size()) {
    throw DimensionError("lstsq_min_norm: C has " + std::to_string(c.rows()) +
                         " rows but d has " + std::to_string(d.size()) + " entries");
  }
  if (c.rows() == 0 || c.cols() == 0) {
    return Vector::Zero(c.cols());
  }
  const double scale = c.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    return Vector::Zero(c.cols());
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c);
  cod.setThreshold(tol::rank);
  return cod.solve(d);
}

Matrix stack_rows(std::span<const Vector> vectors) {
  if (vectors.empty()) {
    return Matrix(0, 0);
  }
  const auto dim = vectors.front().size();
  Matrix out(static_cast<Eigen::Index>(vectors.size()), dim);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != dim) {
      throw DimensionError("stack_rows: vectors of differing dimension");
    }
    out.row(static_cast<Eigen::Index>(j)) = vectors[j].transpose();
  }
  return out;
}

Vector gram_solve(std::span<const Vector> vectors, const Vector& rhs) {
  if (vectors.empty()) {
    return Vector(0);
  }
  if (rhs.size() != static_cast<Eigen::Index>(vectors.size())) {
    throw DimensionError("gram_solve: rhs length differs from number of vectors");
  }
  const Matrix a = stack_rows(vectors);
  const Vector delta = lstsq_min_norm(a, rhs);
  return lstsq_min_norm(a.transpose(), delta);
}

Vector flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unflatten(const Vector& x, Eigen::Index rows, Eigen::Index cols) {
  if (x.size() != rows * cols) {
    throw DimensionError("unflatten: size mismatch");
  }
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

}  // namespace affproj
