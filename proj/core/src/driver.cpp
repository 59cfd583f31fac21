#include "riga/driver.hpp"

#include <chrono>
#include <cmath>

#include "riga/unitary.hpp"

namespace riga {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double lyapunov_value(FeedbackLaw law, const Matrix& goal, const Matrix& x, const GateSpec& spec) {
  const Matrix xt = goal.adjoint() * x;
  if (law == FeedbackLaw::partial) return lyapunov_partial(xt, spec.e);
  try {
    return lyapunov_full(xt);
  } catch (const SingularAtMinusOne&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Relative improvement below rtol over `window` consecutive steps.
class StagnationMonitor {
 public:
  StagnationMonitor(int window, double rtol) : window_(window), rtol_(rtol) {}

  bool update(double value) {
    if (best_ > 0.0 && best_ - value > rtol_ * best_) {
      stalled_ = 0;
    } else {
      ++stalled_;
    }
    best_ = std::min(best_, value);
    return stalled_ >= window_;
  }

 private:
  int window_;
  double rtol_;
  double best_ = std::numeric_limits<double>::infinity();
  int stalled_ = 0;
};

struct GoalSelector {
  const RigaConfig& cfg;
  const GateSpec& spec;
  Matrix nominal;  // fixed unitary with nominal E = F
  std::optional<GoalPath> path;

  // X_goal for this step, given the current open-loop endpoint.
  std::pair<Matrix, Index> select(const Matrix& x_f) {
    switch (cfg.strategy) {
      case GoalStrategy::fixed_goal:
        return {nominal, 0};
      case GoalStrategy::optimize_saturate:
        return {strategy_one_goal(nominal, x_f, spec, cfg.theta_max, cfg.allow_phase), 0};
      case GoalStrategy::goal_path: {
        if (!path) {
          const Matrix star = optgoal(nominal, x_f, spec, cfg.allow_phase).x_goal;
          path.emplace(build_goal_path(x_f, star, spec, cfg.path_alpha, cfg.path_beta));
        }
        const Index q = path->select(x_f, spec);
        return {path->current_goal(), q};
      }
    }
    throw Error("unreachable goal strategy");
  }
};

void check_seed_bounds(const PulseSet& seed, const ShapingConfig& shaping) {
  if (shaping.saturation == SaturationKind::smooth && seed.max_abs() > shaping.u_max) {
    throw SeedOutOfBounds("seed pulses exceed u_max with saturation enabled");
  }
}

}  // namespace

void RigaConfig::validate(const GateSpec& spec) const {
  // gain zero is accepted so a dead-gain run can terminate as NonConvergence
  if (!(gain >= 0.0)) throw ConfigError("config: gain must be nonnegative");
  if (!(target_infidelity > 0.0 && target_infidelity < 1.0)) {
    throw ConfigError("config: target infidelity must lie in (0, 1)");
  }
  if (max_steps < 1) throw ConfigError("config: max_steps must be >= 1");
  if (strategy == GoalStrategy::goal_path &&
      !(path_alpha > 0.0 && path_alpha < path_beta && path_beta < 2.0)) {
    throw ConfigError("config: goal path needs 0 < alpha < beta < 2");
  }
  if (lyapunov == LyapunovChoice::full && !spec.full_dimension()) {
    throw ConfigError("config: the full Lyapunov function needs nbar == n");
  }
  shaping.validate();
  seed.validate();
  grid();  // validates t_final and steps
}

FeedbackLaw RigaConfig::law(const GateSpec& spec) const {
  if (lyapunov == LyapunovChoice::partial) return FeedbackLaw::partial;
  if (lyapunov == LyapunovChoice::full) return FeedbackLaw::full;
  return spec.full_dimension() ? FeedbackLaw::full : FeedbackLaw::partial;
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::target_reached: return "target_reached";
    case Termination::max_steps: return "max_steps";
    case Termination::stagnation: return "stagnation";
    case Termination::no_reachable_goal: return "no_reachable_goal";
    case Termination::cayley_blowup: return "cayley_blowup";
  }
  return "unknown";
}

RunReport run_riga(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg) {
  const PulseMode mode = cfg.variant == Variant::smooth ? PulseMode::smooth : PulseMode::piecewise;
  return run_riga(sys, spec, cfg, generate_seed(cfg.seed, sys.channels(), cfg.grid(), mode));
}

RunReport run_riga(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg,
                   const PulseSet& seed_pulses) {
  sys.validate();
  spec.validate();
  cfg.validate(spec);
  require(spec.space_dim() == sys.dim(), "run_riga: gate and system dimensions differ");
  check_seed_bounds(seed_pulses, cfg.shaping);

  const auto run_start = Clock::now();
  const TimeGrid grid = cfg.grid();
  const Matrix id = Matrix::Identity(sys.dim(), sys.dim());
  const bool smooth = cfg.variant == Variant::smooth;
  if ((smooth && seed_pulses.mode != PulseMode::smooth) ||
      (!smooth && seed_pulses.mode != PulseMode::piecewise)) {
    throw ConfigError("run_riga: seed pulse mode does not match the variant");
  }

  TrackingOptions tracking;
  tracking.gain = cfg.gain;
  tracking.law = cfg.law(spec);
  tracking.shaping = cfg.shaping;

  GoalSelector goals{cfg, spec, spec.nominal_goal(), std::nullopt};
  StagnationMonitor stagnation(cfg.stagnation_window, cfg.stagnation_rtol);

  RunReport report;
  report.pulses = seed_pulses;
  report.termination = Termination::max_steps;

  for (int ell = 1; ell <= cfg.max_steps; ++ell) {
    const auto step_start = Clock::now();

    // #2: open-loop pass over the current reference input.
    SmoothOpenResult open;
    if (smooth) {
      open = propagate_smooth_open(sys, report.pulses, grid, id);
    } else {
      open.trajectory = propagate_pc_forward(sys, report.pulses, grid, id);
    }
    const Matrix& x_f = open.trajectory.back();
    const double current = infidelity(x_f, spec);

    // #3: stop tests.
    if (current <= cfg.target_infidelity) {
      report.termination = Termination::target_reached;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    }
    if (stagnation.update(current)) {
      report.termination = Termination::stagnation;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    }

    StepRecord record;
    record.step = ell;
    try {
      // #4: the step goal.
      auto [goal, q] = goals.select(x_f);
      record.goal_index = q;

      // #5 + #6: right-translated reference, then the closed-loop pass.
      const Matrix r = x_f.adjoint() * goal;
      Trajectory reference;
      ClosedLoopResult closed;
      if (smooth) {
        reference.samples.reserve(open.trajectory.samples.size());
        for (const Matrix& x : open.trajectory.samples) reference.samples.push_back(x * r);
        closed = propagate_smooth_closed(sys, spec, reference, open.charts, report.pulses,
                                         grid, tracking);
      } else {
        reference = propagate_pc_backward(sys, report.pulses, grid, goal);
        closed = propagate_pc_closed(sys, spec, reference, report.pulses, grid, tracking,
                                     PcClosedMode::riga);
      }

      report.pulses = std::move(closed.pulses);
      record.infidelity = infidelity(closed.trajectory.back(), spec);
      record.lyapunov = lyapunov_value(tracking.law, goal, closed.trajectory.back(), spec);
      record.max_pulse = report.pulses.max_abs();
      record.wall_ms = ms_since(step_start);
      report.records.push_back(record);
      report.steps_completed = ell;
      report.final_propagator = closed.trajectory.back();
      report.final_infidelity = record.infidelity;
    } catch (const NoReachableGoal&) {
      report.termination = Termination::no_reachable_goal;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    } catch (const CayleyBlowup&) {
      report.termination = Termination::cayley_blowup;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    }
  }

  report.wall_seconds = ms_since(run_start) / 1e3;
  return report;
}

RunReport run_grape(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg) {
  return run_grape(sys, spec, cfg,
                   generate_seed(cfg.seed, sys.channels(), cfg.grid(), PulseMode::piecewise));
}

RunReport run_grape(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg,
                    const PulseSet& seed_pulses) {
  sys.validate();
  spec.validate();
  if (cfg.variant != Variant::piecewise) {
    throw ConfigError("run_grape: piecewise variant required");
  }
  if (!(cfg.target_infidelity > 0.0 && cfg.target_infidelity < 1.0) || cfg.max_steps < 1) {
    throw ConfigError("run_grape: bad stop parameters");
  }
  // gain zero is allowed here: the sweep then never moves and the run ends
  // in stagnation.
  require(spec.space_dim() == sys.dim(), "run_grape: gate and system dimensions differ");

  const auto run_start = Clock::now();
  const TimeGrid grid = cfg.grid();
  const Matrix id = Matrix::Identity(sys.dim(), sys.dim());
  const Matrix x_goal = spec.nominal_goal();

  TrackingOptions tracking;
  // The sweep applies -K grad V per component; the descent step kappa on
  // grad Omega ~ dt * grad V translates to K = kappa * dt.
  const double kappa = cfg.grape_step > 0.0 ? cfg.grape_step : cfg.gain / grid.dt();
  tracking.gain = kappa * grid.dt();
  tracking.law = cfg.law(spec);
  tracking.shaping = ShapingConfig{};  // plain gradient descent, no shaping

  StagnationMonitor stagnation(cfg.stagnation_window, cfg.stagnation_rtol);

  RunReport report;
  report.pulses = seed_pulses;
  report.pulses.check_shape(grid);
  report.termination = Termination::max_steps;

  for (int ell = 1; ell <= cfg.max_steps; ++ell) {
    const auto step_start = Clock::now();
    const Trajectory traj = propagate_pc_forward(sys, report.pulses, grid, id);
    const Matrix& x_f = traj.back();
    const double current = infidelity(x_f, spec);
    const double omega = lyapunov_value(tracking.law, x_goal, x_f, spec);

    if (current <= cfg.target_infidelity) {
      report.termination = Termination::target_reached;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    }
    if (stagnation.update(omega)) {
      report.termination = Termination::stagnation;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    }

    try {
      const Trajectory reference = propagate_pc_backward(sys, report.pulses, grid, x_goal);
      ClosedLoopResult sweep = propagate_pc_closed(sys, spec, reference, report.pulses, grid,
                                                   tracking, PcClosedMode::grape_lagged);
      report.pulses = std::move(sweep.pulses);
    } catch (const CayleyBlowup&) {
      report.termination = Termination::cayley_blowup;
      report.final_infidelity = current;
      report.final_propagator = x_f;
      break;
    }

    StepRecord record;
    record.step = ell;
    record.infidelity = current;
    record.lyapunov = omega;
    record.max_pulse = report.pulses.max_abs();
    record.wall_ms = ms_since(step_start);
    report.records.push_back(record);
    report.steps_completed = ell;
    report.final_propagator = x_f;
    report.final_infidelity = current;
  }

  report.wall_seconds = ms_since(run_start) / 1e3;
  return report;
}

double resimulate(const SystemModel& expanded, const PulseSet& pulses, const TimeGrid& grid,
                  const GateSpec& embedded) {
  expanded.validate();
  embedded.validate();
  require(embedded.space_dim() == expanded.dim(), "resimulate: dimensions differ");
  const Matrix id = Matrix::Identity(expanded.dim(), expanded.dim());
  Matrix x_f;
  if (pulses.mode == PulseMode::smooth) {
    x_f = propagate_smooth_open(expanded, pulses, grid, id).trajectory.back();
  } else {
    x_f = propagate_pc_forward(expanded, pulses, grid, id).back();
  }
  return infidelity(x_f, embedded);
}

}  // namespace riga
