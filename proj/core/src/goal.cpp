#include "riga/goal.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "riga/unitary.hpp"

namespace riga {

namespace {

void check_goal_feasible(const Matrix& x_goal, const GateSpec& spec) {
  // x_goal E must equal exp(i psi) F for some psi.
  const Matrix g = spec.f.adjoint() * (x_goal * spec.e);
  const Complex tr = g.trace();
  if (std::abs(tr) < 1e-12) {
    throw ConfigError("optgoal: x_goal does not map E onto F up to a phase");
  }
  const Complex psi = tr / std::abs(tr);
  if ((g - psi * Matrix::Identity(g.rows(), g.cols())).norm() > 1e-6) {
    throw ConfigError("optgoal: x_goal does not map E onto F up to a phase");
  }
}

}  // namespace

OptGoalResult optgoal(const Matrix& x_goal, const Matrix& x_f, const GateSpec& spec,
                      bool allow_phase, double svd_tol) {
  const Index n = spec.space_dim();
  const Index nbar = spec.gate_dim();
  require(x_goal.rows() == n && x_f.rows() == n, "optgoal: dimension mismatch");
  check_goal_feasible(x_goal, spec);

  if (nbar == n) {
    // No complement block; only the global phase can move.
    OptGoalResult out;
    if (allow_phase) {
      const Complex tr = (x_goal.conjugate().cwiseProduct(x_f)).sum();
      out.phase = std::abs(tr) > 0.0 ? std::arg(tr) : 0.0;
      out.x_goal = std::polar(1.0, out.phase) * x_goal;
    } else {
      out.x_goal = x_goal;
    }
    return out;
  }

  const Matrix xe = complete_isometry(spec.e);
  const Matrix wf = xe.adjoint() * x_f * xe;
  const Matrix wg = xe.adjoint() * x_goal * xe;
  const Matrix wg1 = wg.leftCols(nbar);
  const Matrix wg2 = wg.rightCols(n - nbar);

  // Complement alignment: unitary polar factor of W_g2^dag W_f2.
  const Matrix coupling = wg2.adjoint() * wf.rightCols(n - nbar);
  Eigen::JacobiSVD<Matrix> svd(coupling, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().minCoeff() <= svd_tol) {
    throw RankDeficient("optgoal: complement coupling block is rank deficient");
  }
  const Matrix aligned_wg2 = wg2 * (svd.matrixU() * svd.matrixV().adjoint());

  std::vector<double> candidates{0.0};
  if (allow_phase) {
    const Complex t11 = (wg1.adjoint() * wf.leftCols(nbar)).trace();
    const double theta = std::arg(Complex(t11.imag(), -t11.real()));
    candidates = {wrap_phase(theta + M_PI / 2.0), wrap_phase(theta - M_PI / 2.0)};
  }

  Matrix wgo(n, n);
  wgo.rightCols(n - nbar) = aligned_wg2;
  double best_dist = 0.0;
  double best_phase = 0.0;
  bool first = true;
  for (double phi : candidates) {
    wgo.leftCols(nbar) = std::polar(1.0, phi) * wg1;
    const double dist = (wgo - wf).norm();
    const bool better =
        first || dist < best_dist - 1e-12 ||
        (std::abs(dist - best_dist) <= 1e-12 && std::abs(phi) < std::abs(best_phase));
    if (better) {
      best_dist = dist;
      best_phase = phi;
      first = false;
    }
  }
  wgo.leftCols(nbar) = std::polar(1.0, best_phase) * wg1;

  OptGoalResult out;
  out.phase = best_phase;
  out.x_goal = xe * wgo * xe.adjoint();
  return out;
}

Index eigenopt_unit_count(const Matrix& x_star, const Matrix& x_f, double tol) {
  const EigphaseDecomposition d = eigphases(x_star.adjoint() * x_f);
  Index count = 0;
  for (Index i = 0; i < d.phases.size(); ++i) {
    if (std::abs(d.phases(i)) <= tol) ++count;
  }
  return count;
}

Matrix strategy_one_goal(const Matrix& x_goal, const Matrix& x_f, const GateSpec& spec,
                         double theta_max, bool allow_phase) {
  const OptGoalResult opt = optgoal(x_goal, x_f, spec, allow_phase);
  const Matrix r = x_f.adjoint() * opt.x_goal;
  return x_f * saturate_eigenphases(r, theta_max);
}

double goal_path_distance(const Matrix& x1, const Matrix& x2, const GateSpec& spec) {
  if (spec.full_dimension()) {
    return std::sqrt(lyapunov_full(x1.adjoint() * x2));
  }
  return partial_distance(x1, x2, spec.e);
}

GoalPath::GoalPath(std::vector<Matrix> matrices, double alpha, double beta)
    : matrices_(std::move(matrices)), alpha_(alpha), beta_(beta) {
  if (matrices_.empty()) throw ConfigError("goal path: at least one goal required");
  if (!(alpha > 0.0 && alpha < beta && beta < 2.0)) {
    throw ConfigError("goal path: need 0 < alpha < beta < 2");
  }
  current_ = hops() > 0 ? 1 : 0;
}

Index GoalPath::select(const Matrix& x_f, const GateSpec& spec) {
  for (Index q = hops(); q >= current_; --q) {
    if (goal_path_distance(matrices_[static_cast<size_t>(q)], x_f, spec) <= beta_) {
      current_ = q;
      return q;
    }
  }
  throw NoReachableGoal("goal path: no entry at or past the current index within beta");
}

GoalPath build_goal_path(const Matrix& x_f0, const Matrix& x_goal_star,
                         const GateSpec& spec, double alpha, double beta) {
  if (goal_path_distance(x_f0, x_goal_star, spec) <= 1e-12) {
    return GoalPath({x_goal_star}, alpha, beta);
  }
  const Matrix r = x_f0.adjoint() * x_goal_star;
  const EigphaseDecomposition d = eigphases(r);
  const Index n = r.rows();

  // Row weights of the eigenbasis against E, so the spacing of the p-th root
  // can be evaluated from phases alone: ||(Sigma_p - I) E||^2 =
  // sum_i |e^{i theta_i / p} - 1|^2 ||(U^dag E)_i||^2.
  RealVector weights(n);
  if (spec.full_dimension()) {
    weights.setOnes();
  } else {
    const Matrix projected = d.vectors.adjoint() * spec.e;
    for (Index i = 0; i < n; ++i) weights(i) = projected.row(i).squaredNorm();
  }
  auto spacing = [&](int p) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double phase = d.phases(i) / p;
      if (spec.full_dimension()) {
        const double t = std::tan(0.5 * phase);
        acc += t * t;
      } else {
        acc += std::norm(std::polar(1.0, phase) - 1.0) * weights(i);
      }
    }
    return std::sqrt(acc);
  };

  int p = 1;
  while (spacing(p) > alpha) {
    ++p;
    if (p > 1000000) throw Error("goal path: spacing bound unreachable");
  }

  std::vector<Matrix> goals;
  goals.reserve(p + 1);
  goals.push_back(x_f0);
  Vector eigs(n);
  for (int q = 1; q < p; ++q) {
    for (Index i = 0; i < n; ++i) {
      eigs(i) = std::polar(1.0, d.phases(i) * q / p);
    }
    goals.push_back(x_f0 * (d.vectors * eigs.asDiagonal() * d.vectors.adjoint()));
  }
  goals.push_back(x_goal_star);
  return GoalPath(std::move(goals), alpha, beta);
}

}  // namespace riga
