#include "affproj/mmup.hpp"

#include <cmath>

namespace affproj::mmup {

namespace {

void require_square(const Matrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(what) + " must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  }
}

void require_even_square(const Matrix& x, const char* what) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0) {
    throw DimensionError(std::string(what) + ": expected a 2n x 2n matrix");
  }
}

}  // namespace

AbcMatrices build_abc(const Matrix& m, const TargetSpectrum& targets) {
  const Eigen::Index n = m.rows();
  require_square(m, n, "M");
  Eigen::Index p = 0;
  for (const auto& t : targets.pairs) {
    if (t.y.size() != n) {
      throw DimensionError("target eigenvector length differs from n");
    }
    p += t.conjugate_pair ? 2 : 1;
  }
  AbcMatrices out{Matrix(n, p), Matrix(n, p), Matrix(n, p)};
  Matrix my(n, p);
  Eigen::Index col = 0;
  for (const auto& t : targets.pairs) {
    const Eigen::VectorXcd ymu = t.y * t.mu;
    const Eigen::VectorXcd ymu2 = ymu * t.mu;
    if (t.conjugate_pair) {
      my.col(col) = ymu2.real();
      my.col(col + 1) = ymu2.imag();
      out.b.col(col) = ymu.real();
      out.b.col(col + 1) = ymu.imag();
      out.c.col(col) = t.y.real();
      out.c.col(col + 1) = t.y.imag();
      col += 2;
    } else {
      if (t.mu.imag() != 0.0 || t.y.imag().cwiseAbs().maxCoeff() != 0.0) {
        throw DimensionError("real target must have real eigenvalue and eigenvector");
      }
      my.col(col) = ymu2.real();
      out.b.col(col) = ymu.real();
      out.c.col(col) = t.y.real();
      col += 1;
    }
  }
  out.a = m * my;
  return out;
}

MmupProblem::MmupProblem(PencilData pencil, TargetSpectrum targets) {
  auto data = std::make_shared<Data>();
  const Eigen::Index n = pencil.m.rows();
  if (n <= 0) {
    throw DimensionError("pencil matrices must be nonempty");
  }
  require_square(pencil.m, n, "M");
  require_square(pencil.d, n, "D");
  require_square(pencil.k, n, "K");
  require_finite(pencil.m, "M");
  require_finite(pencil.d, "D");
  require_finite(pencil.k, "K");
  data->n = n;
  data->abc = build_abc(pencil.m, targets);
  const Eigen::Index p = data->abc.a.cols();
  if (p == 0) {
    throw ConfigError("at least one target eigenpair is required");
  }
  data->w.resize(2 * n, p);
  data->w << data->abc.c, data->abc.b;
  data->ihat.resize(2 * n, n);
  data->ihat << Matrix::Identity(n, n), Matrix::Identity(n, n);
  data->x0 = embed_update(pencil.k, pencil.d);

  const Eigen::MatrixXd wtw = data->w.transpose() * data->w;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(wtw);
  cod.setThreshold(tol::rank);
  if (cod.rank() < p) {
    throw ConfigError("W^T W is singular; targets do not determine an affine variety");
  }
  data->wtw_inv = cod.pseudoInverse();
  data->pencil = std::move(pencil);
  data->targets = std::move(targets);
  data_ = data;

  const Eigen::Index side = 2 * n;
  sets_.push_back(AffineSet::custom(
      4 * n * n,
      [side](const Vector& x) { return flatten(project_s(unflatten(x, side, side))); }, "S",
      [n] { return export_rows_s(n); }));
  sets_.push_back(AffineSet::custom(
      4 * n * n,
      [data, side](const Vector& x) {
        return flatten(project_v_impl(*data, unflatten(x, side, side)));
      },
      "V",
      [data, this_n = n] {
        // Rebuild the row system from the shared data.
        RowConstraints rows{Matrix::Zero(this_n * data->w.cols(), 4 * this_n * this_n),
                            Vector(this_n * data->w.cols())};
        const Eigen::Index p = data->w.cols();
        const Eigen::Index side2 = 2 * this_n;
        for (Eigen::Index r = 0; r < this_n; ++r) {
          for (Eigen::Index s = 0; s < p; ++s) {
            const Eigen::Index row = r * p + s;
            for (Eigen::Index c = 0; c < side2; ++c) {
              rows.c(row, r * side2 + c) += data->w(c, s);
              rows.c(row, (this_n + r) * side2 + c) += data->w(c, s);
            }
            rows.d(row) = -data->abc.a(r, s);
          }
        }
        return rows;
      }));
}

Matrix MmupProblem::project_v_impl(const Data& data, const Matrix& x) {
  require_even_square(x, "project_v");
  if (x.rows() != 2 * data.n) {
    throw DimensionError("project_v: matrix size does not match the problem");
  }
  const Matrix sigma =
      -0.5 * (data.abc.a + data.ihat.transpose() * x * data.w) * data.wtw_inv;
  return x + data.ihat * sigma * data.w.transpose();
}

Matrix MmupProblem::project_v(const Matrix& x) const { return project_v_impl(*data_, x); }

Matrix project_s(const Matrix& x) {
  require_even_square(x, "project_s");
  const Eigen::Index n = x.rows() / 2;
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  const Matrix k = x.topLeftCorner(n, n);
  const Matrix d = x.bottomRightCorner(n, n);
  out.topLeftCorner(n, n) = 0.5 * (k + k.transpose());
  out.bottomRightCorner(n, n) = 0.5 * (d + d.transpose());
  return out;
}

Matrix project_v(const Matrix& x, const MmupProblem& problem) { return problem.project_v(x); }

RowConstraints export_rows_s(Eigen::Index n) {
  const Eigen::Index side = 2 * n;
  const Eigen::Index rows = 2 * n * n + n * (n - 1);
  RowConstraints out{Matrix::Zero(rows, side * side), Vector::Zero(rows)};
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.c(row++, i * side + (n + j)) = 1.0;
      out.c(row++, (n + i) * side + j) = 1.0;
    }
  }
  for (Eigen::Index block = 0; block < 2; ++block) {
    const Eigen::Index o = block * n;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        out.c(row, (o + i) * side + (o + j)) = 1.0;
        out.c(row, (o + j) * side + (o + i)) = -1.0;
        ++row;
      }
    }
  }
  return out;
}

RowConstraints export_rows_v(const MmupProblem& problem) { return problem.set_v().export_rows(); }

double pencil_residual(const MmupProblem& problem, const Matrix& x) {
  if (x.rows() != 2 * problem.n() || x.cols() != 2 * problem.n()) {
    throw DimensionError("pencil_residual: matrix size does not match the problem");
  }
  return (problem.a() + problem.ihat().transpose() * x * problem.w()).norm();
}

double s_pencil_residual(const MmupProblem& problem, const Vector& x) {
  const Eigen::Index side = 2 * problem.n();
  return pencil_residual(problem, project_s(unflatten(x, side, side)));
}

std::pair<Matrix, Matrix> extract_update(const Matrix& x) {
  require_even_square(x, "extract_update");
  const Eigen::Index n = x.rows() / 2;
  return {x.topLeftCorner(n, n), x.bottomRightCorner(n, n)};
}

Matrix embed_update(const Matrix& k, const Matrix& d) {
  const Eigen::Index n = k.rows();
  require_square(k, n, "K");
  require_square(d, n, "D");
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = k;
  out.bottomRightCorner(n, n) = d;
  return out;
}

Eigen::VectorXcd pencil_eigenvalues(const Matrix& m, const Matrix& d, const Matrix& k) {
  const Eigen::Index n = m.rows();
  require_square(m, n, "M");
  require_square(d, n, "D");
  require_square(k, n, "K");
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(m)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  companion.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  companion.bottomLeftCorner(n, n) = -lu.solve(Eigen::MatrixXd(k));
  companion.bottomRightCorner(n, n) = -lu.solve(Eigen::MatrixXd(d));
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) {
    throw Error("pencil_eigenvalues: eigensolver did not converge");
  }
  return es.eigenvalues();
}

double eigenpair_residual(const PencilData& pencil, std::complex<double> mu,
                          const Eigen::VectorXcd& y) {
  const Eigen::MatrixXcd p = mu * mu * pencil.m.cast<std::complex<double>>() +
                             mu * pencil.d.cast<std::complex<double>>() +
                             pencil.k.cast<std::complex<double>>();
  return (p * y).norm();
}

Matrix experiment1_printed_mass() {
  Matrix m(4, 4);
  m << 1.4685, 0.7177, 0.4757, 0.4311,
       0.7177, 2.6938, 1.2660, 0.9676,
       0.4757, 1.2660, 2.7061, 1.3948,
       0.4311, 0.9676, 1.3918, 2.1876;
  return m;
}

Experiment experiment1() {
  PencilData pencil;
  // The printed (3,4) entry 1.3948 breaks symmetry; 1.3918 reproduces the
  // reported spectrum, the printed value misses it by about 1e-3.
  pencil.m = experiment1_printed_mass();
  pencil.m(2, 3) = pencil.m(3, 2);
  pencil.d.resize(4, 4);
  pencil.d << 1.3525, 1.2695, 0.7967, 0.8160,
              1.2695, 1.3274, 0.9144, 0.7325,
              0.7967, 0.9144, 0.9456, 0.8310,
              0.8160, 0.7325, 0.8310, 1.1536;
  pencil.k.resize(4, 4);
  pencil.k << 1.7824, 0.0076, -0.1359, -0.7290,
              0.0076, 1.0287, -0.0101, -0.0493,
             -0.1359, -0.0101, 2.8360, -0.2564,
             -0.7290, -0.0493, -0.2564, 1.9130;
  using cd = std::complex<double>;
  Target target;
  target.mu = cd(-0.1, 1.6242);
  target.y.resize(4);
  target.y << cd(1.0, 0.0), cd(0.0535, 0.3834), cd(0.5297, 0.0668), cd(0.6711, 0.4175);
  target.conjugate_pair = true;
  TargetSpectrum targets{{target}};
  MmupProblem problem(pencil, targets);
  return {std::move(pencil), std::move(problem)};
}

Experiment experiment2() {
  constexpr Eigen::Index n = 30;
  PencilData pencil;
  pencil.m = 4.0 * Matrix::Identity(n, n);
  pencil.d = 4.0 * Matrix::Identity(n, n);
  pencil.k = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pencil.k(i, i) = (i == 0 || i == n - 1) ? 1.0 : 2.0;
    if (i + 1 < n) {
      pencil.k(i, i + 1) = -1.0;
      pencil.k(i + 1, i) = -1.0;
    }
  }
  Target target;
  target.mu = -0.018;
  target.y = Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  TargetSpectrum targets{{target}};
  MmupProblem problem(pencil, targets);
  return {std::move(pencil), std::move(problem)};
}

}  // namespace affproj::mmup
