#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "affproj/errors.hpp"

namespace affproj {

// Points of the Hilbert space R^n. Matrices that play the role of points are
// flattened row-major, so the Frobenius inner product is the plain dot product.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace tol {
// Singular values (pivots) below rank * largest are treated as zero.
inline constexpr double rank = 1e-12;
// Membership / idempotency assertions on unit-scale problems.
inline constexpr double lin = 1e-10;
// Post-solve residual above which a set or intersection is declared empty.
inline constexpr double feas = 1e-8;
}  // namespace tol

// Throws DimensionError unless every entry is finite.
void require_finite(const Vector& x, const char* what);
void require_finite(const Matrix& m, const char* what);

double inner(const Vector& x, const Vector& y);

// Minimum-norm minimizer of ||C x - d||_2. Rank deficiency is resolved with a
// complete orthogonal decomposition using the tol::rank threshold.
Vector lstsq_min_norm(const Matrix& c, const Vector& d);

// Coefficients lambda of minimal norm solving G lambda = rhs in the least
// squares sense, G_jk = <a_j, a_k>. Solved through the stacked normals A
// (rows a_j) as lambda = (A^T)^+ A^+ rhs, never by forming G.
Vector gram_solve(std::span<const Vector> vectors, const Vector& rhs);

// Stack vectors as the rows of a matrix. All must share one dimension.
Matrix stack_rows(std::span<const Vector> vectors);

// Row-major flattening of a matrix into a point, and back.
Vector flatten(const Matrix& m);
Matrix unflatten(const Vector& x, Eigen::Index rows, Eigen::Index cols);

}  // namespace affproj
