#ifndef RIGA_UNITARY_HPP
#define RIGA_UNITARY_HPP

#include "riga/types.hpp"

namespace riga {

// Eigenstructure of a unitary (normal) matrix: R = vectors * diag(exp(i*phases)) * vectors^dag.
// Computed by Schur triangularization plus diagonal extraction; phases lie in (-pi, pi].
struct EigphaseDecomposition {
  Matrix vectors;     // unitary, columns are eigenvectors
  RealVector phases;  // in (-pi, pi]

  Matrix reconstruct() const;
};

EigphaseDecomposition eigphases(const Matrix& r, double diag_tol = 1e-9);

// W(X) = (X - I)(X + I)^{-1}, mapping unitaries with no eigenvalue at -1
// onto skew-Hermitian matrices. Throws SingularAtMinusOne if an eigenvalue
// of X lies within eig_tol of -1.
Matrix cayley_forward(const Matrix& x, double eig_tol = 1e-8);

// Inverse map X(W) = -(W - I)^{-1}(W + I); defined on all of u(n) since
// (W - I) is invertible for skew-Hermitian W.
Matrix cayley_inverse(const Matrix& w);

// exp(dt * A) for skew-Hermitian A (diagonal Pade with scaling and squaring).
Matrix exp_skew(const Matrix& a, double dt = 1.0);

// Clamp every eigenphase of R into [-theta_max, theta_max], keeping eigenvectors.
Matrix saturate_eigenphases(const Matrix& r, double theta_max);

// Principal p-th root: eigenphases divided by p, so they land in (-pi/p, pi/p].
Matrix pth_root(const Matrix& r, int p);

// Closest unitary in Frobenius norm (the unitary polar factor U*V^dag of the
// SVD). Throws RankDeficient when a singular value is at or below svd_tol.
Matrix unitary_projection(const Matrix& x, double svd_tol = 1e-12);

// pdist(X1, X2) = ||(X1 - X2) E||_F, the disagreement on the encoded subspace.
double partial_distance(const Matrix& x1, const Matrix& x2, const Matrix& e);

// Complete an isometry to a unitary whose leading columns are exactly E.
Matrix complete_isometry(const Matrix& e);

// min_i |lambda_i + 1| for unitary X (equals the smallest singular value of X + I).
double min_distance_to_minus_one(const Matrix& x);

}  // namespace riga

#endif
