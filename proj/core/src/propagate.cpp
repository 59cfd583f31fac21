#include "riga/propagate.hpp"

#include <cmath>

#include "riga/unitary.hpp"

namespace riga {

namespace {

constexpr double kChartLimit = 1e3;  // Frobenius bound before the chart is declared lost

// dW/dt for the transported dynamics: F(W, S) = -1/2 (W - I) S (W + I).
Matrix chart_rhs(const Matrix& w, const Matrix& sigma) {
  const Index n = w.rows();
  const Matrix id = Matrix::Identity(n, n);
  return -0.5 * ((w - id) * sigma * (w + id));
}

void check_chart(const Matrix& w) {
  const double norm = w.norm();
  if (!std::isfinite(norm) || norm > kChartLimit) {
    throw CayleyBlowup("integration step left the Cayley chart");
  }
}

RealVector pulse_column(const PulseSet& pulses, Index col) {
  return pulses.values.col(col);
}

}  // namespace

double Trajectory::max_unitarity_defect() const {
  double worst = 0.0;
  for (const Matrix& x : samples) worst = std::max(worst, unitarity_defect(x));
  return worst;
}

double propagator_infidelity(const Matrix& x1, const Matrix& x2) {
  require(x1.rows() == x2.rows() && x1.cols() == x2.cols(),
          "propagator_infidelity: shape mismatch");
  const double n = static_cast<double>(x1.rows());
  const double overlap = std::abs((x2.conjugate().cwiseProduct(x1)).sum()) / n;
  return 1.0 - overlap * overlap;
}

Trajectory propagate_pc_forward(const SystemModel& sys, const PulseSet& pulses,
                                const TimeGrid& grid, const Matrix& x0) {
  if (pulses.mode != PulseMode::piecewise) {
    throw ConfigError("propagate_pc_forward: piecewise pulses expected");
  }
  pulses.check_shape(grid);
  require(pulses.channels() == sys.channels(), "propagate_pc_forward: channel count mismatch");
  const double dt = grid.dt();
  Trajectory traj;
  traj.samples.reserve(grid.steps + 1);
  traj.samples.push_back(x0);
  for (int s = 1; s <= grid.steps; ++s) {
    Matrix step = exp_skew(sys.generator(pulse_column(pulses, s - 1)), dt);
    traj.samples.push_back(step * traj.samples.back());
  }
  return traj;
}

Trajectory propagate_pc_backward(const SystemModel& sys, const PulseSet& pulses,
                                 const TimeGrid& grid, const Matrix& x_goal) {
  if (pulses.mode != PulseMode::piecewise) {
    throw ConfigError("propagate_pc_backward: piecewise pulses expected");
  }
  pulses.check_shape(grid);
  require(pulses.channels() == sys.channels(), "propagate_pc_backward: channel count mismatch");
  const double dt = grid.dt();
  Trajectory traj;
  traj.samples.assign(grid.steps + 1, Matrix());
  traj.samples[grid.steps] = x_goal;
  for (int s = grid.steps; s >= 1; --s) {
    Matrix step = exp_skew(sys.generator(pulse_column(pulses, s - 1)), -dt);
    traj.samples[s - 1] = step * traj.samples[s];
  }
  return traj;
}

SmoothOpenResult propagate_smooth_open(const SystemModel& sys, const PulseSet& pulses,
                                       const TimeGrid& grid, const Matrix& x0,
                                       int refine) {
  if (pulses.mode != PulseMode::smooth) {
    throw ConfigError("propagate_smooth_open: smooth pulses expected");
  }
  pulses.check_shape(grid);
  require(pulses.channels() == sys.channels(), "propagate_smooth_open: channel count mismatch");
  if (refine < 1) throw ConfigError("propagate_smooth_open: refine must be >= 1");

  const Index m = sys.channels();
  const double h = grid.dt() / refine;
  RealVector u(m);
  auto sigma_at = [&](double t) {
    for (Index k = 0; k < m; ++k) u(k) = pulses.at(k, t, grid);
    return sys.generator(u);
  };

  SmoothOpenResult out;
  out.trajectory.samples.reserve(grid.steps * refine + 1);
  out.charts.reserve(grid.steps * refine);
  out.trajectory.samples.push_back(x0);
  const Index n = sys.dim();
  const Matrix w0 = Matrix::Zero(n, n);
  for (int s = 0; s < grid.steps * refine; ++s) {
    const double t = s * h;
    const Matrix sig0 = sigma_at(t);
    const Matrix sigh = sigma_at(t + 0.5 * h);
    const Matrix sig1 = sigma_at(t + h);
    Matrix k1 = h * chart_rhs(w0, sig0);
    Matrix k2 = h * chart_rhs(0.5 * k1, sigh);
    Matrix k3 = h * chart_rhs(0.5 * k2, sigh);
    Matrix k4 = h * chart_rhs(k3, sig1);
    Matrix w = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    check_chart(w);
    out.trajectory.samples.push_back(cayley_inverse(w) * out.trajectory.samples.back());
    out.charts.push_back(std::move(w));
  }
  return out;
}

namespace {

// Reference data for the three RK4 stage offsets of one step.
struct StageRefs {
  double t[3];
  Matrix xbar[3];          // reference propagator at tau = 0, dt/2, dt
  RealVector ubar[3];      // interpolated reference input
  double window[3];
  std::vector<Matrix> st[3];  // Xbar^dag S_k Xbar, filled for the full law only
};

class SmoothFeedback {
 public:
  SmoothFeedback(const SystemModel& sys, const GateSpec& spec, const TrackingOptions& opt)
      : sys_(sys), spec_(spec), opt_(opt) {}

  // Feedback-corrected input at stage `j` for current propagator X.
  RealVector corrected_input(const StageRefs& ref, int j, const Matrix& x) const {
    const Index m = sys_.channels();
    RealVector u(m);
    if (opt_.law == FeedbackLaw::partial) {
      const Matrix ybar = ref.xbar[j] * spec_.e;
      const Matrix y = x * spec_.e;
      for (Index k = 0; k < m; ++k) {
        const Complex tr = (ybar.conjugate().cwiseProduct(sys_.s[static_cast<size_t>(k)] * y)).sum();
        const double raw = 2.0 * opt_.gain * tr.real();
        u(k) = apply_shaping(ref.ubar[j](k), ref.window[j] * raw);
      }
    } else {
      const Matrix xt = ref.xbar[j].adjoint() * x;
      const Matrix z = lyapunov_full_gradient_factor(xt);
      check_chart(z);
      for (Index k = 0; k < m; ++k) {
        const Complex tr = (z.transpose().cwiseProduct(ref.st[j][static_cast<size_t>(k)])).sum();
        const double raw = opt_.gain * tr.real();
        u(k) = apply_shaping(ref.ubar[j](k), ref.window[j] * raw);
      }
    }
    return u;
  }

 private:
  double apply_shaping(double ubar, double utilde) const {
    if (opt_.shaping.saturation == SaturationKind::smooth) {
      return saturation_policy(ubar, utilde, opt_.shaping.u_max);
    }
    return ubar + utilde;
  }

  const SystemModel& sys_;
  const GateSpec& spec_;
  const TrackingOptions& opt_;
};

}  // namespace

ClosedLoopResult propagate_smooth_closed(const SystemModel& sys, const GateSpec& spec,
                                         const Trajectory& reference,
                                         const std::vector<Matrix>& reference_charts,
                                         const PulseSet& reference_pulses,
                                         const TimeGrid& grid,
                                         const TrackingOptions& options) {
  if (reference_pulses.mode != PulseMode::smooth) {
    throw ConfigError("propagate_smooth_closed: smooth reference pulses expected");
  }
  reference_pulses.check_shape(grid);
  if (static_cast<int>(reference.samples.size()) != grid.steps + 1 ||
      static_cast<int>(reference_charts.size()) != grid.steps) {
    throw DimensionMismatch("propagate_smooth_closed: reference not sampled on this grid");
  }
  options.shaping.validate();
  if (options.law == FeedbackLaw::full && !spec.full_dimension()) {
    throw ConfigError("propagate_smooth_closed: full law needs nbar == n");
  }

  const Index m = sys.channels();
  const Index n = sys.dim();
  const double dt = grid.dt();
  SmoothFeedback feedback(sys, spec, options);

  ClosedLoopResult out;
  out.pulses = PulseSet::zero(PulseMode::smooth, m, grid);
  out.trajectory.samples.reserve(grid.steps + 1);
  out.trajectory.samples.push_back(Matrix::Identity(n, n));

  StageRefs ref;
  for (int s = 0; s < grid.steps; ++s) {
    const double ts = grid.time(s);
    ref.t[0] = ts;
    ref.t[1] = ts + 0.5 * dt;
    ref.t[2] = ts + dt;
    ref.xbar[0] = reference.samples[s];
    // Mid-step reference through the midpoint of the step chart.
    ref.xbar[1] = cayley_inverse(0.5 * reference_charts[s]) * reference.samples[s];
    ref.xbar[2] = reference.samples[s + 1];
    ref.ubar[0] = reference_pulses.values.col(s);
    ref.ubar[2] = reference_pulses.values.col(s + 1);
    ref.ubar[1] = 0.5 * (ref.ubar[0] + ref.ubar[2]);
    for (int j = 0; j < 3; ++j) {
      ref.window[j] = options.shaping.window_value(ref.t[j], grid.t_final);
      if (options.law == FeedbackLaw::full) {
        ref.st[j].clear();
        ref.st[j].reserve(m);
        for (Index k = 0; k < m; ++k) {
          ref.st[j].push_back(ref.xbar[j].adjoint() * sys.s[static_cast<size_t>(k)] * ref.xbar[j]);
        }
      }
    }

    const Matrix& xs = out.trajectory.samples.back();
    out.pulses.values.col(s) = feedback.corrected_input(ref, 0, xs);

    auto stage_sigma = [&](int j, const Matrix& w) {
      const Matrix x = w.isZero(0.0) ? xs : Matrix(cayley_inverse(w) * xs);
      return sys.generator(feedback.corrected_input(ref, j, x));
    };
    const Matrix w0 = Matrix::Zero(n, n);
    Matrix k1 = dt * chart_rhs(w0, stage_sigma(0, w0));
    Matrix k2 = dt * chart_rhs(0.5 * k1, stage_sigma(1, (0.5 * k1).eval()));
    Matrix k3 = dt * chart_rhs(0.5 * k2, stage_sigma(1, (0.5 * k2).eval()));
    Matrix k4 = dt * chart_rhs(k3, stage_sigma(2, k3));
    Matrix w = (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    check_chart(w);
    out.trajectory.samples.push_back(cayley_inverse(w) * xs);

    if (s == grid.steps - 1) {
      out.pulses.values.col(grid.steps) =
          feedback.corrected_input(ref, 2, out.trajectory.samples.back());
    }
  }
  return out;
}

ClosedLoopResult propagate_pc_closed(const SystemModel& sys, const GateSpec& spec,
                                     const Trajectory& reference,
                                     const PulseSet& reference_pulses,
                                     const TimeGrid& grid,
                                     const TrackingOptions& options,
                                     PcClosedMode mode) {
  if (reference_pulses.mode != PulseMode::piecewise) {
    throw ConfigError("propagate_pc_closed: piecewise reference pulses expected");
  }
  reference_pulses.check_shape(grid);
  if (static_cast<int>(reference.samples.size()) != grid.steps + 1) {
    throw DimensionMismatch("propagate_pc_closed: reference not sampled on this grid");
  }
  options.shaping.validate();
  if (options.law == FeedbackLaw::full && !spec.full_dimension()) {
    throw ConfigError("propagate_pc_closed: full law needs nbar == n");
  }

  const Index m = sys.channels();
  const Index n = sys.dim();
  const double dt = grid.dt();

  ClosedLoopResult out;
  out.pulses = PulseSet::zero(PulseMode::piecewise, m, grid);
  out.trajectory.samples.reserve(grid.steps + 1);
  out.trajectory.samples.push_back(Matrix::Identity(n, n));

  for (int s = 1; s <= grid.steps; ++s) {
    const Matrix& xbar = reference.samples[s - 1];
    const Matrix& x = out.trajectory.samples.back();
    const double w = options.shaping.window_value(grid.time(s - 1), grid.t_final);

    // -K grad V . (St_k Xt) per channel, at the step's left node.
    RealVector update(m);
    if (options.law == FeedbackLaw::partial) {
      const Matrix ybar = xbar * spec.e;
      const Matrix y = x * spec.e;
      for (Index k = 0; k < m; ++k) {
        const Complex tr = (ybar.conjugate().cwiseProduct(sys.s[static_cast<size_t>(k)] * y)).sum();
        update(k) = w * 2.0 * options.gain * tr.real();
      }
    } else {
      const Matrix xt = xbar.adjoint() * x;
      const Matrix z = lyapunov_full_gradient_factor(xt);
      check_chart(z);
      for (Index k = 0; k < m; ++k) {
        const Matrix st = xbar.adjoint() * sys.s[static_cast<size_t>(k)] * xbar;
        const Complex tr = (z.transpose().cwiseProduct(st)).sum();
        update(k) = w * 4.0 * options.gain * tr.real();
      }
    }

    for (Index k = 0; k < m; ++k) {
      const double ubar = reference_pulses.values(k, s - 1);
      if (options.shaping.saturation == SaturationKind::smooth) {
        out.pulses.values(k, s - 1) = saturation_policy(ubar, update(k), options.shaping.u_max);
      } else {
        out.pulses.values(k, s - 1) = ubar + update(k);
      }
    }

    const RealVector& ucol = mode == PcClosedMode::riga
                                 ? RealVector(out.pulses.values.col(s - 1))
                                 : RealVector(reference_pulses.values.col(s - 1));
    out.trajectory.samples.push_back(exp_skew(sys.generator(ucol), dt) * x);
  }
  return out;
}

namespace {

// Piecewise pulses with every interval split `refine` times.
PulseSet split_piecewise(const PulseSet& pulses, const TimeGrid& grid, int refine,
                         TimeGrid& out_grid) {
  out_grid = TimeGrid(grid.t_final, refine * grid.steps);
  PulseSet out = PulseSet::zero(PulseMode::piecewise, pulses.channels(), out_grid);
  for (int s = 0; s < grid.steps; ++s) {
    for (int j = 0; j < refine; ++j) out.values.col(refine * s + j) = pulses.values.col(s);
  }
  return out;
}

}  // namespace

double halfstep_infidelity(const SystemModel& sys, const PulseSet& pulses,
                           const TimeGrid& grid, int refine) {
  pulses.check_shape(grid);
  if (refine < 1) throw ConfigError("halfstep_infidelity: refine must be >= 1");
  const Matrix x0 = Matrix::Identity(sys.dim(), sys.dim());
  if (pulses.mode == PulseMode::smooth) {
    const Matrix full = propagate_smooth_open(sys, pulses, grid, x0, refine).trajectory.back();
    const Matrix half = propagate_smooth_open(sys, pulses, grid, x0, 2 * refine).trajectory.back();
    return propagator_infidelity(full, half);
  }
  TimeGrid full_grid, half_grid;
  const PulseSet full_pulses = split_piecewise(pulses, grid, refine, full_grid);
  const PulseSet half_pulses = split_piecewise(pulses, grid, 2 * refine, half_grid);
  const Matrix full = propagate_pc_forward(sys, full_pulses, full_grid, x0).back();
  const Matrix half = propagate_pc_forward(sys, half_pulses, half_grid, x0).back();
  return propagator_infidelity(full, half);
}

Trajectory direct_rk4_diagnostic(const SystemModel& sys, const PulseSet& pulses,
                                 const TimeGrid& grid, Rk4Correction correction) {
  pulses.check_shape(grid);
  const Index m = sys.channels();
  const Index n = sys.dim();
  const double dt = grid.dt();
  RealVector u(m);
  auto sigma_at = [&](double t) {
    for (Index k = 0; k < m; ++k) u(k) = pulses.at(k, t, grid);
    return sys.generator(u);
  };

  Trajectory traj;
  traj.samples.reserve(grid.steps + 1);
  traj.samples.push_back(Matrix::Identity(n, n));
  for (int s = 0; s < grid.steps; ++s) {
    const double t = grid.time(s);
    const Matrix sig0 = sigma_at(t);
    const Matrix sigh = sigma_at(t + 0.5 * dt);
    const Matrix sig1 = sigma_at(t + dt);
    const Matrix& x = traj.samples.back();
    Matrix k1 = dt * (sig0 * x);
    Matrix k2 = dt * (sigh * (x + 0.5 * k1));
    Matrix k3 = dt * (sigh * (x + 0.5 * k2));
    Matrix k4 = dt * (sig1 * (x + k3));
    Matrix next = x + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (correction == Rk4Correction::unitary_projection) {
      next = unitary_projection(next);
    }
    traj.samples.push_back(std::move(next));
  }
  return traj;
}

}  // namespace riga
