#ifndef RIGA_DRIVER_HPP
#define RIGA_DRIVER_HPP

#include <optional>
#include <vector>

#include "riga/goal.hpp"
#include "riga/propagate.hpp"
#include "riga/seed.hpp"

namespace riga {

enum class Variant { smooth, piecewise };
enum class LyapunovChoice { automatic, partial, full };
enum class GoalStrategy { fixed_goal, optimize_saturate, goal_path };
enum class Termination {
  target_reached,
  max_steps,
  stagnation,
  no_reachable_goal,
  cayley_blowup,
};

struct RigaConfig {
  double gain = 1.0;   // K
  double t_final = 1.0;
  int steps = 100;     // N_sim
  double target_infidelity = 1e-3;
  int max_steps = 300;
  Variant variant = Variant::smooth;
  LyapunovChoice lyapunov = LyapunovChoice::automatic;
  GoalStrategy strategy = GoalStrategy::optimize_saturate;
  double path_alpha = 0.5;  // goal-path spacing bound
  double path_beta = 1.0;   // goal-path switch radius
  double theta_max = M_PI / 4.0;
  bool allow_phase = true;
  ShapingConfig shaping;
  SeedConfig seed;
  double grape_step = 0.0;  // GRAPE gain; <= 0 means gain / dt
  int stagnation_window = 20;
  double stagnation_rtol = 1e-9;

  void validate(const GateSpec& spec) const;
  FeedbackLaw law(const GateSpec& spec) const;
  TimeGrid grid() const { return TimeGrid(t_final, steps); }
};

struct StepRecord {
  int step = 0;
  double infidelity = 1.0;  // closed-loop endpoint of this step
  double lyapunov = 0.0;    // V(Xt(T_f)) against this step's goal
  Index goal_index = 0;
  double max_pulse = 0.0;
  double wall_ms = 0.0;
};

struct RunReport {
  std::vector<StepRecord> records;
  PulseSet pulses;
  Matrix final_propagator;
  double final_infidelity = 1.0;  // open-loop value for the returned pulses
  Termination termination = Termination::max_steps;
  int steps_completed = 0;
  double wall_seconds = 0.0;

  bool reached_target() const { return termination == Termination::target_reached; }
};

const char* termination_name(Termination t);

// The iterative loop: open-loop simulate, test the infidelity, build the
// step goal, right-translate the reference, close the loop, repeat.
RunReport run_riga(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg);

// Same, with caller-supplied seed pulses (replayed coefficient files).
RunReport run_riga(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg,
                   const PulseSet& seed_pulses);

// First-order gradient descent on Omega(U) = V(X_goal^dag X(U)) over
// piecewise-constant amplitudes, realized as the lagged-update sweep.
RunReport run_grape(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg);
RunReport run_grape(const SystemModel& sys, const GateSpec& spec, const RigaConfig& cfg,
                    const PulseSet& seed_pulses);

// Open-loop replay of finished pulses inside a larger truncation; returns the
// infidelity against the embedded gate spec.
double resimulate(const SystemModel& expanded, const PulseSet& pulses, const TimeGrid& grid,
                  const GateSpec& embedded);

}  // namespace riga

#endif
