#ifndef RIGA_PROPAGATE_HPP
#define RIGA_PROPAGATE_HPP

#include <vector>

#include "riga/problem.hpp"
#include "riga/pulses.hpp"

namespace riga {

struct Trajectory {
  std::vector<Matrix> samples;  // X_0 .. X_{N_sim}

  const Matrix& front() const { return samples.front(); }
  const Matrix& back() const { return samples.back(); }
  double max_unitarity_defect() const;
};

// Which Lyapunov function drives the tracking feedback.
enum class FeedbackLaw { partial, full };

struct TrackingOptions {
  double gain = 1.0;
  FeedbackLaw law = FeedbackLaw::partial;
  ShapingConfig shaping;
};

// Per-step exponential stepping X_s = exp[dt (S0 + sum u_{k_s} S_k)] X_{s-1}.
Trajectory propagate_pc_forward(const SystemModel& sys, const PulseSet& pulses,
                                const TimeGrid& grid, const Matrix& x0);

// Backward sweep Xb_{s-1} = exp[-dt (S0 + sum u_{k_s} S_k)] Xb_s from Xb_N = x_goal.
Trajectory propagate_pc_backward(const SystemModel& sys, const PulseSet& pulses,
                                 const TimeGrid& grid, const Matrix& x_goal);

struct SmoothOpenResult {
  Trajectory trajectory;
  // Skew-Hermitian chart increment of each step: X_{s+1} = Cayley^{-1}(charts[s]) X_s.
  std::vector<Matrix> charts;
};

// Cayley-chart RK4 for piecewise-linear inputs. Each step integrates
// dW/dt = -1/2 (W - I) Sigma(t) (W + I) from W = 0 and applies the increment by
// right invariance, so every sample is unitary up to roundoff. `refine`
// subdivides each grid interval (inputs stay interpolated on the coarse grid).
SmoothOpenResult propagate_smooth_open(const SystemModel& sys, const PulseSet& pulses,
                                       const TimeGrid& grid, const Matrix& x0,
                                       int refine = 1);

struct ClosedLoopResult {
  Trajectory trajectory;
  PulseSet pulses;  // updated reference input (smooth: N+1 nodes, pc: N values)
};

// Closed-loop Cayley RK4 tracking the reference trajectory. The reference is
// given by its node samples and per-step charts (from the open-loop pass over
// the same inputs); its value at mid-step is interpolated at the chart
// midpoint. The updated input is the feedback-corrected reference sampled at
// the left node of every step plus the final right node.
ClosedLoopResult propagate_smooth_closed(const SystemModel& sys, const GateSpec& spec,
                                         const Trajectory& reference,
                                         const std::vector<Matrix>& reference_charts,
                                         const PulseSet& reference_pulses,
                                         const TimeGrid& grid,
                                         const TrackingOptions& options);

enum class PcClosedMode {
  riga,          // step s propagates with the just-updated input
  grape_lagged,  // step s propagates with the previous input (open loop)
};

// Piecewise-constant closed loop: per step, update
//   u^l_{k_s} = u^{l-1}_{k_s} - K grad V . (St_k Xt)
// evaluated at the left node, then step by the exact exponential.
ClosedLoopResult propagate_pc_closed(const SystemModel& sys, const GateSpec& spec,
                                     const Trajectory& reference,
                                     const PulseSet& reference_pulses,
                                     const TimeGrid& grid,
                                     const TrackingOptions& options,
                                     PcClosedMode mode);

// Full-space infidelity (E = F = I) between the final propagators obtained
// with steps dt/refine and dt/(2 refine) over the same inputs (inputs stay
// interpolated on the coarse grid).
double halfstep_infidelity(const SystemModel& sys, const PulseSet& pulses,
                           const TimeGrid& grid, int refine = 1);

enum class Rk4Correction { none, unitary_projection };

// Naive RK4 on dX/dt = Sigma(t) X in the ambient matrix space, optionally
// re-projected onto U(n) after every step. Comparison diagnostic only.
Trajectory direct_rk4_diagnostic(const SystemModel& sys, const PulseSet& pulses,
                                 const TimeGrid& grid, Rk4Correction correction);

// Full-space infidelity between two unitaries, 1 - (|trace(X2^dag X1)| / n)^2.
double propagator_infidelity(const Matrix& x1, const Matrix& x2);

}  // namespace riga

#endif
