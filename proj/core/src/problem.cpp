#include "riga/problem.hpp"

#include <cmath>

#include "riga/unitary.hpp"

namespace riga {

void SystemModel::validate(double tol) const {
  const Index n = s0.rows();
  if (n == 0 || s0.cols() != n) throw ConfigError("system: drift must be square and nonempty");
  if (s.empty()) throw ConfigError("system: at least one control generator required");
  if (!is_skew_hermitian(s0, tol * std::max(1.0, s0.norm()))) {
    throw ConfigError("system: drift generator is not skew-Hermitian");
  }
  for (const Matrix& sk : s) {
    if (sk.rows() != n || sk.cols() != n) {
      throw ConfigError("system: control generator shape mismatch");
    }
    if (!is_skew_hermitian(sk, tol * std::max(1.0, sk.norm()))) {
      throw ConfigError("system: control generator is not skew-Hermitian");
    }
  }
}

Matrix SystemModel::generator(const Eigen::Ref<const RealVector>& u) const {
  require(u.size() == channels(), "generator: control vector length mismatch");
  Matrix g = s0;
  for (Index k = 0; k < channels(); ++k) {
    g.noalias() += u(k) * s[static_cast<size_t>(k)];
  }
  return g;
}

void GateSpec::validate(double tol) const {
  if (e.rows() != f.rows() || e.cols() != f.cols()) {
    throw ConfigError("gate: E and F must share their shape");
  }
  if (e.cols() < 1 || e.cols() > e.rows()) {
    throw ConfigError("gate: need 1 <= nbar <= n");
  }
  if (!is_isometry(e, tol) || !is_isometry(f, tol)) {
    throw ConfigError("gate: E and F must have orthonormal columns");
  }
}

Matrix GateSpec::nominal_goal() const {
  Matrix xe = complete_isometry(e);
  Matrix xf = complete_isometry(f);
  return xf * xe.adjoint();
}

void ShapingConfig::validate() const {
  if (saturation == SaturationKind::smooth && !(u_max > 0.0)) {
    throw ConfigError("shaping: u_max must be positive when saturation is on");
  }
}

double ShapingConfig::window_value(double t, double t_final) const {
  return window == WindowKind::hamming ? window_hamming(t, t_final) : 1.0;
}

double infidelity(const Matrix& x, const GateSpec& spec) {
  require(x.rows() == spec.space_dim() && x.cols() == spec.space_dim(),
          "infidelity: propagator dimension mismatch");
  const Complex tr = (spec.f.conjugate().cwiseProduct(x * spec.e)).sum();
  const double overlap = std::abs(tr) / static_cast<double>(spec.gate_dim());
  return 1.0 - overlap * overlap;
}

double lyapunov_partial(const Matrix& xt, const Matrix& e) {
  require(xt.cols() == e.rows(), "lyapunov_partial: shape mismatch");
  const double nbar = static_cast<double>(e.cols());
  const Complex tr = (e.conjugate().cwiseProduct(xt * e)).sum();
  return 2.0 * nbar - 2.0 * tr.real();
}

double lyapunov_full(const Matrix& xt, double eig_tol) {
  Matrix w = cayley_forward(xt, eig_tol);
  return w.squaredNorm();
}

double feedback_partial(const Matrix& xt, const Matrix& st_k, const Matrix& e,
                        double gain, double window) {
  const Complex tr = (e.conjugate().cwiseProduct(st_k * (xt * e))).sum();
  return window * 2.0 * gain * tr.real();
}

namespace {

// B A^{-1} reusing a single factorization of A^T.
Matrix rdiv(const Matrix& b, const Eigen::PartialPivLU<Matrix>& lu_at) {
  return lu_at.solve(b.transpose()).transpose();
}

}  // namespace

Matrix lyapunov_full_gradient_factor(const Matrix& xt) {
  const Index n = xt.rows();
  const Matrix id = Matrix::Identity(n, n);
  Eigen::PartialPivLU<Matrix> lu((xt + id).transpose().eval());
  Matrix m = rdiv(xt - id, lu);
  m = rdiv(m, lu);
  m = rdiv(m, lu);
  return xt * m;
}

Matrix lyapunov_full_gradient_factor_cayley(const Matrix& w_minus) {
  const Index n = w_minus.rows();
  const Matrix id = Matrix::Identity(n, n);
  return 0.25 * w_minus * (w_minus + id) * (w_minus - id);
}

double feedback_full(const Matrix& xt, const Matrix& st_k, double gain,
                     double window, double eig_tol) {
  if (min_distance_to_minus_one(xt) <= eig_tol) {
    throw SingularAtMinusOne("feedback_full: eigenvalue within tolerance of -1");
  }
  const Matrix z = lyapunov_full_gradient_factor(xt);
  const Complex tr = (z.transpose().cwiseProduct(st_k)).sum();
  return window * gain * tr.real();
}

double window_hamming(double t, double t_final) {
  return 0.5 * (1.0 - std::cos(2.0 * M_PI * t / t_final));
}

double smooth_sat(double x, double u_star) {
  if (!(u_star > 0.0)) throw Error("smooth_sat: u_star must be positive");
  // Odd, unit slope at the origin, asymptotes at +-u_star.
  return u_star * (2.0 / M_PI) * std::atan(M_PI * x / (2.0 * u_star));
}

double saturation_policy(double u_bar, double u_tilde, double u_max) {
  if (std::abs(u_bar) > u_max) {
    throw SeedOutOfBounds("saturation_policy: reference input exceeds u_max");
  }
  const double headroom = u_tilde >= 0.0 ? u_max - u_bar : u_max + u_bar;
  double out = u_bar;
  if (headroom > 0.0) {
    out += smooth_sat(u_tilde, headroom);
  }
  return std::clamp(out, -u_max, u_max);
}

}  // namespace riga
