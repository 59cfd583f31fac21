#ifndef RIGA_TYPES_HPP
#define RIGA_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace riga {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Default numerical tolerances, overridable per call where it matters.
struct Tolerances {
  double unitarity = 1e-9;   // ||X^dag X - I||_F admitted for a unitary
  double eig = 1e-8;         // distance of an eigenvalue from -1 treated as singular
  double svd = 1e-12;        // singular values below this count as rank deficiency
  double diag = 1e-10;       // residual admitted when rebuilding from an eigenstructure
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An eigenvalue of the input sits within tolerance of -1, where the Cayley
// map and the tan^2 Lyapunov function are undefined.
struct SingularAtMinusOne : Error {
  using Error::Error;
};

// A singular value at or below svd_tol makes the requested factor undefined.
struct RankDeficient : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// A reference (seed) input sample lies outside [-u_max, u_max].
struct SeedOutOfBounds : Error {
  using Error::Error;
};

// No goal-path entry at or past the current index lies within the switch
// radius; the iteration has diverged from the path.
struct NoReachableGoal : Error {
  using Error::Error;
};

// The Cayley chart left its domain inside an integration step (an eigenphase
// of the step increment approached pi).
struct CayleyBlowup : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatch(what);
}

// Frobenius norm of X^dag X - I.
inline double unitarity_defect(const Matrix& x) {
  return (x.adjoint() * x - Matrix::Identity(x.rows(), x.cols())).norm();
}

inline bool is_unitary(const Matrix& x, double tol = 1e-9) {
  return x.rows() == x.cols() && unitarity_defect(x) <= tol;
}

inline bool is_skew_hermitian(const Matrix& a, double tol = 1e-9) {
  return a.rows() == a.cols() && (a + a.adjoint()).norm() <= tol;
}

// Columns orthonormal: E^dag E = I_nbar.
inline bool is_isometry(const Matrix& e, double tol = 1e-9) {
  if (e.rows() < e.cols()) return false;
  return (e.adjoint() * e - Matrix::Identity(e.cols(), e.cols())).norm() <= tol;
}

// Wrap a phase into (-pi, pi]; a tie at -pi maps to +pi.
inline double wrap_phase(double theta) {
  double t = std::remainder(theta, 2.0 * M_PI);
  if (t <= -M_PI) t += 2.0 * M_PI;
  return t;
}

}  // namespace riga

#endif
