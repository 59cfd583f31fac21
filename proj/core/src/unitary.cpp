#include "riga/unitary.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace riga {

Matrix EigphaseDecomposition::reconstruct() const {
  Vector d(phases.size());
  for (Index i = 0; i < phases.size(); ++i) {
    d(i) = std::polar(1.0, phases(i));
  }
  return vectors * d.asDiagonal() * vectors.adjoint();
}

EigphaseDecomposition eigphases(const Matrix& r, double diag_tol) {
  require(r.rows() == r.cols(), "eigphases: square matrix expected");
  Eigen::ComplexSchur<Matrix> schur(r, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw Error("eigphases: Schur decomposition failed");
  }
  EigphaseDecomposition out;
  out.vectors = schur.matrixU();
  const Matrix& t = schur.matrixT();
  out.phases.resize(r.rows());
  for (Index i = 0; i < r.rows(); ++i) {
    out.phases(i) = wrap_phase(std::arg(t(i, i)));
  }
  // For a unitary input the Schur form is diagonal up to roundoff; the
  // discarded strict upper triangle is the reconstruction residual.
  double residual = (out.reconstruct() - r).norm();
  if (residual > diag_tol * std::max(1.0, r.norm())) {
    throw Error("eigphases: reconstruction residual " + std::to_string(residual) +
                " exceeds tolerance (input not normal enough?)");
  }
  return out;
}

double min_distance_to_minus_one(const Matrix& x) {
  EigphaseDecomposition d = eigphases(x);
  double best = 2.0;
  for (Index i = 0; i < d.phases.size(); ++i) {
    best = std::min(best, std::abs(std::polar(1.0, d.phases(i)) + 1.0));
  }
  return best;
}

Matrix cayley_forward(const Matrix& x, double eig_tol) {
  require(x.rows() == x.cols(), "cayley_forward: square matrix expected");
  if (min_distance_to_minus_one(x) <= eig_tol) {
    throw SingularAtMinusOne("cayley_forward: eigenvalue within tolerance of -1");
  }
  const Index n = x.rows();
  Matrix xpi = x + Matrix::Identity(n, n);
  // W (X + I) = (X - I), solved through the transposed system.
  Matrix w = xpi.transpose().partialPivLu().solve((x - Matrix::Identity(n, n)).transpose()).transpose();
  // The exact image is skew-Hermitian; remove the roundoff part.
  return 0.5 * (w - w.adjoint().eval());
}

Matrix cayley_inverse(const Matrix& w) {
  require(w.rows() == w.cols(), "cayley_inverse: square matrix expected");
  const Index n = w.rows();
  Matrix i = Matrix::Identity(n, n);
  return -(w - i).partialPivLu().solve(w + i);
}

Matrix exp_skew(const Matrix& a, double dt) {
  require(a.rows() == a.cols(), "exp_skew: square matrix expected");
  return Matrix(dt * a).exp();
}

Matrix saturate_eigenphases(const Matrix& r, double theta_max) {
  if (!(theta_max > 0.0 && theta_max <= M_PI)) {
    throw Error("saturate_eigenphases: theta_max must lie in (0, pi]");
  }
  EigphaseDecomposition d = eigphases(r);
  bool touched = false;
  for (Index i = 0; i < d.phases.size(); ++i) {
    double clamped = std::clamp(d.phases(i), -theta_max, theta_max);
    touched = touched || clamped != d.phases(i);
    d.phases(i) = clamped;
  }
  return touched ? d.reconstruct() : r;
}

Matrix pth_root(const Matrix& r, int p) {
  if (p < 1) throw Error("pth_root: p must be >= 1");
  if (p == 1) return r;
  EigphaseDecomposition d = eigphases(r);
  d.phases /= static_cast<double>(p);
  return d.reconstruct();
}

Matrix unitary_projection(const Matrix& x, double svd_tol) {
  require(x.rows() == x.cols(), "unitary_projection: square matrix expected");
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().minCoeff() <= svd_tol) {
    throw RankDeficient("unitary_projection: singular value at or below tolerance");
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

double partial_distance(const Matrix& x1, const Matrix& x2, const Matrix& e) {
  require(x1.rows() == x2.rows() && x1.cols() == x2.cols(),
          "partial_distance: operand shapes differ");
  require(x1.cols() == e.rows(), "partial_distance: isometry row count mismatch");
  return ((x1 - x2) * e).norm();
}

Matrix complete_isometry(const Matrix& e) {
  const Index n = e.rows();
  const Index nbar = e.cols();
  require(nbar <= n, "complete_isometry: more columns than rows");
  if (nbar == n) return e;
  Eigen::HouseholderQR<Matrix> qr(e);
  Matrix q = qr.householderQ();
  Matrix out(n, n);
  out.leftCols(nbar) = e;
  out.rightCols(n - nbar) = q.rightCols(n - nbar);
  return out;
}

}  // namespace riga
