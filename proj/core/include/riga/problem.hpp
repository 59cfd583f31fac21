#ifndef RIGA_PROBLEM_HPP
#define RIGA_PROBLEM_HPP

#include <vector>

#include "riga/types.hpp"

namespace riga {

// Controlled dynamics dX/dt = (S0 + sum_k u_k S_k) X on U(n), with
// skew-Hermitian generators S_k = -i H_k.
struct SystemModel {
  Matrix s0;
  std::vector<Matrix> s;

  Index dim() const { return s0.rows(); }
  Index channels() const { return static_cast<Index>(s.size()); }

  void validate(double tol = 1e-9) const;

  // S0 + sum_k u_k S_k
  Matrix generator(const Eigen::Ref<const RealVector>& u) const;
};

// Target map: columns of E span the decoded subspace, columns of F the
// encoded one; the gate steers E onto F up to a global phase.
struct GateSpec {
  Matrix e;
  Matrix f;

  Index gate_dim() const { return e.cols(); }
  Index space_dim() const { return e.rows(); }
  bool full_dimension() const { return e.cols() == e.rows(); }

  void validate(double tol = 1e-9) const;

  // Some unitary with X E = F (completion of both isometries to bases).
  Matrix nominal_goal() const;
};

enum class WindowKind { none, hamming };
enum class SaturationKind { off, smooth };

struct ShapingConfig {
  WindowKind window = WindowKind::none;
  SaturationKind saturation = SaturationKind::off;
  double u_max = 0.0;  // per-channel bound, required when saturation is on

  void validate() const;
  double window_value(double t, double t_final) const;
};

// 1 - (|trace(F^dag X E)| / nbar)^2; zero exactly when X realizes the
// encoded gate up to a global phase. Not clamped here (clamping is a
// reporting concern).
double infidelity(const Matrix& x, const GateSpec& spec);

// Partial-trace Lyapunov function 2 nbar - 2 Re trace(E^dag Xt E) = ||(Xt - I)E||^2.
double lyapunov_partial(const Matrix& xt, const Matrix& e);

// ||(Xt - I)(Xt + I)^{-1}||_F^2 = sum_i tan^2(theta_i / 2) over the
// eigenphases of Xt. Throws SingularAtMinusOne near an eigenvalue of -1.
double lyapunov_full(const Matrix& xt, double eig_tol = 1e-8);

// Tracking feedback for the partial-trace function:
//   u_k = w * 2K * Re trace(E^dag St_k Xt E) = -w * K * grad V . (St_k Xt).
double feedback_partial(const Matrix& xt, const Matrix& st_k, const Matrix& e,
                        double gain, double window = 1.0);

// Z(Xt) = Xt (Xt - I)(Xt + I)^{-3}; the full-Lyapunov feedback is
// u_k = K * Re trace(Z(Xt) St_k). No eigenvalue check here; callers on the
// hot path guard via the returned norm.
Matrix lyapunov_full_gradient_factor(const Matrix& xt);

// Same value through the skew-space chart: z(W) = 1/4 W (W + I)(W - I)
// evaluated at W = (I - Xt)(I + Xt)^{-1}.
Matrix lyapunov_full_gradient_factor_cayley(const Matrix& w_minus);

// Full-Lyapunov tracking feedback u_k = w * K * Re trace(Z(Xt) St_k).
// Checks the spectrum of Xt against eig_tol before evaluating.
double feedback_full(const Matrix& xt, const Matrix& st_k, double gain,
                     double window = 1.0, double eig_tol = 1e-8);

// Hamming-like window 1/2 (1 - cos(2 pi t / T_f)): zero value and slope at
// both endpoints, one at the midpoint.
double window_hamming(double t, double t_final);

// Odd, strictly bounded saturation u* phi(x/u*) with phi(x) = (2x/pi) atan(pi x / 2).
double smooth_sat(double x, double u_star);

// Apply the feedback correction u_tilde on top of the reference u_bar with
// asymmetric headroom u_max -+ u_bar, so the result stays inside
// [-u_max, u_max] and the correction keeps its sign.
double saturation_policy(double u_bar, double u_tilde, double u_max);

}  // namespace riga

#endif
