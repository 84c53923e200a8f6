#pragma once

#include <complex>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "affproj/affine_sets.hpp"

// Matrix model updating: minimally perturb stiffness K and damping D so the
// quadratic pencil lambda^2 M + lambda D + K acquires prescribed eigenpairs.
// The unknown is the 2n x 2n block matrix X = diag(K~, D~), flattened
// row-major into a point of R^{4n^2}.
namespace affproj::mmup {

struct PencilData {
  Matrix m;
  Matrix d;
  Matrix k;

  Eigen::Index n() const { return m.rows(); }
};

struct Target {
  std::complex<double> mu;
  Eigen::VectorXcd y;
  // A conjugate pair (mu, conj(mu)) stored once; contributes two real columns.
  bool conjugate_pair = false;
};

struct TargetSpectrum {
  std::vector<Target> pairs;
};

struct AbcMatrices {
  Matrix a;  // M Y (Lambda)^2, n x p
  Matrix b;  // Y Lambda
  Matrix c;  // Y
};

// Real targets give one column each; conjugate pairs give the real and
// imaginary parts as two columns.
AbcMatrices build_abc(const Matrix& m, const TargetSpectrum& targets);

class MmupProblem {
 public:
  MmupProblem(PencilData pencil, TargetSpectrum targets);

  Eigen::Index n() const { return data_->n; }
  Eigen::Index p() const { return data_->abc.a.cols(); }
  Eigen::Index dim() const { return 4 * n() * n(); }

  const PencilData& pencil() const { return data_->pencil; }
  const TargetSpectrum& targets() const { return data_->targets; }
  const Matrix& x0() const { return data_->x0; }
  const Matrix& a() const { return data_->abc.a; }
  const Matrix& b() const { return data_->abc.b; }
  const Matrix& c() const { return data_->abc.c; }
  const Matrix& w() const { return data_->w; }
  const Matrix& ihat() const { return data_->ihat; }

  // {S, V}: S is set 0 (cheap, plays M_1 for alg2), V is set 1.
  const AffineSet& set_s() const { return sets_[0]; }
  const AffineSet& set_v() const { return sets_[1]; }
  std::span<const AffineSet> sets() const { return sets_; }

  Matrix project_v(const Matrix& x) const;

 private:
  struct Data {
    PencilData pencil;
    TargetSpectrum targets;
    Eigen::Index n = 0;
    AbcMatrices abc;
    Matrix w;
    Matrix ihat;
    Matrix x0;
    Matrix wtw_inv;
  };
  static Matrix project_v_impl(const Data& data, const Matrix& x);

  std::shared_ptr<const Data> data_;
  std::vector<AffineSet> sets_;
};

// Zero off-diagonal blocks, symmetrize the diagonal blocks.
Matrix project_s(const Matrix& x);
// X + I^ Sigma W^T with Sigma = -1/2 (A + I^T X W)(W^T W)^{-1}.
Matrix project_v(const Matrix& x, const MmupProblem& problem);

// Row systems on the flattened 2n x 2n variable with solution sets S and V.
RowConstraints export_rows_s(Eigen::Index n);
RowConstraints export_rows_v(const MmupProblem& problem);

// ||A + I^T X W||_F.
double pencil_residual(const MmupProblem& problem, const Matrix& x);
// pencil_residual of P_S(x) for a flattened iterate; the progress measure
// used for convergence plots and threshold counts.
double s_pencil_residual(const MmupProblem& problem, const Vector& x);

std::pair<Matrix, Matrix> extract_update(const Matrix& x);  // (K~, D~)
Matrix embed_update(const Matrix& k, const Matrix& d);

// Eigenvalues of lambda^2 M + lambda D + K via companion linearization.
Eigen::VectorXcd pencil_eigenvalues(const Matrix& m, const Matrix& d, const Matrix& k);
// ||(mu^2 M + mu D + K) y||_2.
double eigenpair_residual(const PencilData& pencil, std::complex<double> mu,
                          const Eigen::VectorXcd& y);

struct Experiment {
  PencilData pencil;
  MmupProblem problem;
};

// 4x4 instance; reassigns -0.0861 +- 1.6242i to -0.1 +- 1.6242i. Uses the
// symmetric mass matrix (entry (3,4) = 1.3918).
Experiment experiment1();
// Mass matrix exactly as printed, with M(3,4) = 1.3948 != M(4,3).
Matrix experiment1_printed_mass();
// 30x30 chain with a zero eigenvalue moved to -0.018.
Experiment experiment2();

}  // namespace affproj::mmup
