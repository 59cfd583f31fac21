#include "riga/spectra.hpp"

#include <cmath>

namespace riga {

Spectrum pulse_spectrum(const PulseSet& pulses, const TimeGrid& grid) {
  pulses.check_shape(grid);
  const Index m = pulses.channels();
  const Index n = pulses.samples();
  const double dt = grid.dt();
  const Index bins = n / 2 + 1;

  Spectrum out;
  out.sample_count = n;
  out.nyquist = 0.5 / dt;
  out.frequencies.resize(bins);
  out.magnitudes.resize(m, bins);
  out.channel_average.resize(bins);

  // Direct real-input DFT; pulse tables are short enough that O(N^2) is fine.
  const double step = 2.0 * M_PI / static_cast<double>(n);
  for (Index bin = 0; bin < bins; ++bin) {
    out.frequencies(bin) = static_cast<double>(bin) / (static_cast<double>(n) * dt);
    for (Index k = 0; k < m; ++k) {
      double re = 0.0, im = 0.0;
      for (Index s = 0; s < n; ++s) {
        const double phase = step * static_cast<double>(bin) * static_cast<double>(s);
        re += pulses.values(k, s) * std::cos(phase);
        im -= pulses.values(k, s) * std::sin(phase);
      }
      out.magnitudes(k, bin) = std::hypot(re, im);
    }
  }
  for (Index bin = 0; bin < bins; ++bin) {
    out.channel_average(bin) = out.magnitudes.col(bin).mean();
  }
  return out;
}

NyquistReport nyquist_margin(const Spectrum& spectrum, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("nyquist_margin: fraction must lie in (0, 1)");
  }
  NyquistReport report;
  report.cutoff = fraction * spectrum.nyquist;

  // Two-sided energy weights: interior bins of the one-sided spectrum count
  // twice, the DC and (for even N) Nyquist bins once.
  const Index bins = spectrum.frequencies.size();
  const bool even = spectrum.sample_count % 2 == 0;
  double total = 0.0;
  double above = 0.0;
  for (Index bin = 0; bin < bins; ++bin) {
    double weight = 2.0;
    if (bin == 0 || (even && bin == bins - 1)) weight = 1.0;
    const double energy = weight * spectrum.magnitudes.col(bin).squaredNorm();
    total += energy;
    if (spectrum.frequencies(bin) > report.cutoff) above += energy;
  }
  report.energy_fraction_above = total > 0.0 ? above / total : 0.0;
  report.flagged = report.energy_fraction_above > 0.01;
  return report;
}

}  // namespace riga
