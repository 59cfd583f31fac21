#include "riga/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace riga {

double PulseSet::at(Index k, double t, const TimeGrid& grid) const {
  const double dt = grid.dt();
  if (mode == PulseMode::smooth) {
    const double x = std::clamp(t / dt, 0.0, static_cast<double>(grid.steps));
    const Index s = std::min(static_cast<Index>(x), static_cast<Index>(grid.steps - 1));
    const double frac = x - static_cast<double>(s);
    return (1.0 - frac) * values(k, s) + frac * values(k, s + 1);
  }
  // Piecewise: value s covers (t_{s-1}, t_s]; t = 0 belongs to the first interval.
  Index s = static_cast<Index>(std::ceil(t / dt - 1e-12)) - 1;
  s = std::clamp<Index>(s, 0, grid.steps - 1);
  return values(k, s);
}

PulseSet sample_piecewise(const PulseSet& smooth, const TimeGrid& grid, int refine,
                          TimeGrid& out_grid) {
  if (smooth.mode != PulseMode::smooth) throw ConfigError("sample_piecewise: smooth input expected");
  smooth.check_shape(grid);
  if (refine < 1) throw ConfigError("sample_piecewise: refine must be >= 1");
  out_grid = TimeGrid(grid.t_final, grid.steps * refine);
  PulseSet out = PulseSet::zero(PulseMode::piecewise, smooth.channels(), out_grid);
  for (Index k = 0; k < smooth.channels(); ++k) {
    for (int s = 1; s <= out_grid.steps; ++s) {
      out.values(k, s - 1) = smooth.at(k, out_grid.time(s), grid);
    }
  }
  return out;
}

}  // namespace riga
