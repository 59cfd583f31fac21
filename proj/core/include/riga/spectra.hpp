#ifndef RIGA_SPECTRA_HPP
#define RIGA_SPECTRA_HPP

#include <vector>

#include "riga/pulses.hpp"

namespace riga {

// One-sided magnitude spectrum of a sampled pulse set (rectangular analysis
// window; frequencies in cycles per time unit).
struct Spectrum {
  RealVector frequencies;       // ascending, up to the Nyquist frequency
  RealMatrix magnitudes;        // one row per channel, |DFT| per bin
  RealVector channel_average;   // mean magnitude over channels per bin
  double nyquist = 0.0;         // 1 / (2 dt)
  Index sample_count = 0;       // N used by the transform
};

Spectrum pulse_spectrum(const PulseSet& pulses, const TimeGrid& grid);

struct NyquistReport {
  bool flagged = false;
  double energy_fraction_above = 0.0;  // share of spectral energy above the cutoff
  double cutoff = 0.0;                 // fraction * nyquist
};

// Flags when more than 1% of the spectral energy sits above fraction * nyquist.
NyquistReport nyquist_margin(const Spectrum& spectrum, double fraction);

}  // namespace riga

#endif
