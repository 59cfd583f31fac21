#ifndef RIGA_GOAL_HPP
#define RIGA_GOAL_HPP

#include <vector>

#include "riga/problem.hpp"

namespace riga {

struct OptGoalResult {
  Matrix x_goal;  // unitary with x_goal E = exp(i phase) X_goal E
  double phase = 0.0;
};

// Closest unitary to x_f (Frobenius) whose action on the decoded subspace
// equals that of x_goal up to a global phase (phase fixed to zero when
// allow_phase is off). SVD-based block construction; throws RankDeficient
// when the complement coupling block loses rank.
OptGoalResult optgoal(const Matrix& x_goal, const Matrix& x_f, const GateSpec& spec,
                      bool allow_phase = true, double svd_tol = 1e-12);

// Number of eigenphases of x_star^dag x_f within tol of zero. For optgoal
// outputs this is at least n - 2 nbar.
Index eigenopt_unit_count(const Matrix& x_star, const Matrix& x_f, double tol = 1e-8);

// Optimize-then-saturate goal: R = x_f^dag optgoal(...), eigenphases of R
// clamped into [-theta_max, theta_max], goal = x_f R^sat.
Matrix strategy_one_goal(const Matrix& x_goal, const Matrix& x_f, const GateSpec& spec,
                         double theta_max = M_PI / 4.0, bool allow_phase = true);

// Precomputed chain of intermediate goals x_f0 * Sigma^q with Sigma the
// principal p-th root of x_f0^dag x_goal_star; consecutive entries are at
// most alpha apart in partial distance, and a monotone switching policy
// advances along the chain.
class GoalPath {
 public:
  GoalPath(std::vector<Matrix> matrices, double alpha, double beta);

  const std::vector<Matrix>& matrices() const { return matrices_; }
  Index hops() const { return static_cast<Index>(matrices_.size()) - 1; }
  Index current_index() const { return current_; }
  const Matrix& current_goal() const { return matrices_[static_cast<size_t>(current_)]; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // Switching policy: advance to the largest index q >= current whose goal is
  // within beta of x_f (distance per `spec`; full-space when nbar == n).
  // Throws NoReachableGoal when even the current goal violates the bound.
  Index select(const Matrix& x_f, const GateSpec& spec);

 private:
  std::vector<Matrix> matrices_;
  double alpha_;
  double beta_;
  Index current_ = 1;
};

// Distance used by the goal path: pdist for encoded gates, sqrt of the
// tan^2 Lyapunov function when nbar == n.
double goal_path_distance(const Matrix& x1, const Matrix& x2, const GateSpec& spec);

// Build the path from x_f0 to x_goal_star with spacing bound alpha.
GoalPath build_goal_path(const Matrix& x_f0, const Matrix& x_goal_star,
                         const GateSpec& spec, double alpha, double beta);

}  // namespace riga

#endif
