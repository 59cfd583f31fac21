#ifndef RIGA_PULSES_HPP
#define RIGA_PULSES_HPP

#include "riga/types.hpp"

namespace riga {

// Uniform grid t_s = s * dt on [0, T_f], s = 0..steps.
struct TimeGrid {
  double t_final = 0.0;
  int steps = 0;

  TimeGrid() = default;
  TimeGrid(double t_f, int n_sim) : t_final(t_f), steps(n_sim) {
    if (!(t_f > 0.0) || n_sim < 1) throw ConfigError("grid: need T_f > 0 and N_sim >= 1");
  }

  double dt() const { return t_final / steps; }
  double time(int s) const { return s * dt(); }
};

enum class PulseMode { smooth, piecewise };

// Channel-major pulse table: one row per control channel.
// Smooth pulses carry steps+1 node samples (linearly interpolated between
// nodes); piecewise pulses carry one value per interval (t_{s-1}, t_s].
struct PulseSet {
  PulseMode mode = PulseMode::smooth;
  RealMatrix values;  // m x (steps+1) or m x steps

  Index channels() const { return values.rows(); }
  Index samples() const { return values.cols(); }

  static PulseSet zero(PulseMode mode, Index m, const TimeGrid& grid) {
    PulseSet p;
    p.mode = mode;
    p.values = RealMatrix::Zero(m, mode == PulseMode::smooth ? grid.steps + 1 : grid.steps);
    return p;
  }

  void check_shape(const TimeGrid& grid) const {
    const Index want = mode == PulseMode::smooth ? grid.steps + 1 : grid.steps;
    if (samples() != want) throw DimensionMismatch("pulses: sample count does not match grid");
  }

  // Value of channel k at time t (linear interpolation for smooth pulses,
  // left-open interval lookup for piecewise ones).
  double at(Index k, double t, const TimeGrid& grid) const;

  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

// Resample a smooth pulse set as piecewise-constant values on the grid
// refined r times, taking the interpolated value at each interval's right
// edge. Returns the refined grid through `out_grid`.
PulseSet sample_piecewise(const PulseSet& smooth, const TimeGrid& grid, int refine,
                          TimeGrid& out_grid);

}  // namespace riga

#endif
