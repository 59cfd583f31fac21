#include <doctest.h>

#include <random>

#include "riga/spectra.hpp"

using namespace riga;

namespace {

double parseval_spectral_energy(const Spectrum& sp, Index channel) {
  double acc = 0.0;
  const bool even = sp.sample_count % 2 == 0;
  for (Index bin = 0; bin < sp.frequencies.size(); ++bin) {
    double w = bin == 0 || (even && bin == sp.frequencies.size() - 1) ? 1.0 : 2.0;
    acc += w * sp.magnitudes(channel, bin) * sp.magnitudes(channel, bin);
  }
  return acc;
}

}  // namespace

TEST_CASE("constant pulse concentrates in the zero bin") {
  const TimeGrid grid(2.0, 32);
  PulseSet p = PulseSet::zero(PulseMode::smooth, 2, grid);
  p.values.setConstant(0.7);
  const Spectrum sp = pulse_spectrum(p, grid);
  CHECK(sp.frequencies(0) == 0.0);
  CHECK(sp.magnitudes(0, 0) == doctest::Approx(0.7 * 33).epsilon(1e-12));
  for (Index bin = 1; bin < sp.frequencies.size(); ++bin) {
    CHECK(sp.magnitudes(0, bin) < 1e-10 * sp.magnitudes(0, 0));
  }
  CHECK(nyquist_margin(sp, 0.5).flagged == false);
}

TEST_CASE("bin-aligned sinusoid dominates a single bin") {
  // N = 64 samples of frequency 4 / (N dt): exactly bin 4 of the transform
  const TimeGrid grid(6.4, 63);  // dt = 0.1015..., careful: use sample count 64
  PulseSet p = PulseSet::zero(PulseMode::smooth, 1, grid);
  const Index n = p.samples();
  for (Index s = 0; s < n; ++s) {
    p.values(0, s) = std::sin(2.0 * M_PI * 4.0 * double(s) / double(n));
  }
  const Spectrum sp = pulse_spectrum(p, grid);
  Index peak = 0;
  sp.magnitudes.row(0).maxCoeff(&peak);
  CHECK(peak == 4);
  for (Index bin = 0; bin < sp.frequencies.size(); ++bin) {
    if (bin != 4) CHECK(sp.magnitudes(0, bin) <= 1e-10 * sp.magnitudes(0, 4));
  }
}

TEST_CASE("two injected tones reappear with their amplitudes") {
  const TimeGrid grid(12.8, 127);
  PulseSet p = PulseSet::zero(PulseMode::smooth, 1, grid);
  const Index n = p.samples();
  for (Index s = 0; s < n; ++s) {
    p.values(0, s) = 1.0 * std::cos(2.0 * M_PI * 3.0 * double(s) / double(n)) +
                     0.25 * std::cos(2.0 * M_PI * 11.0 * double(s) / double(n));
  }
  const Spectrum sp = pulse_spectrum(p, grid);
  // cosine at bin k has one-sided magnitude N/2 * amplitude
  CHECK(sp.magnitudes(0, 3) == doctest::Approx(0.5 * n * 1.0).epsilon(1e-9));
  CHECK(sp.magnitudes(0, 11) == doctest::Approx(0.5 * n * 0.25).epsilon(1e-9));
  for (Index bin = 0; bin < sp.frequencies.size(); ++bin) {
    if (bin != 3 && bin != 11) CHECK(sp.magnitudes(0, bin) < 1e-8 * double(n));
  }
}

TEST_CASE("Parseval identity holds to 1e-8 relative") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int steps : {16, 31, 50}) {
    const TimeGrid grid(1.0, steps);
    PulseSet p = PulseSet::zero(PulseMode::smooth, 3, grid);
    for (Index k = 0; k < 3; ++k) {
      for (Index s = 0; s < p.samples(); ++s) p.values(k, s) = dist(rng);
    }
    const Spectrum sp = pulse_spectrum(p, grid);
    for (Index k = 0; k < 3; ++k) {
      const double time_energy = double(p.samples()) * p.values.row(k).squaredNorm();
      CHECK(parseval_spectral_energy(sp, k) ==
            doctest::Approx(time_energy).epsilon(1e-8));
    }
  }
}

TEST_CASE("nyquist margin flags high-frequency content") {
  const TimeGrid grid(6.4, 63);
  PulseSet p = PulseSet::zero(PulseMode::smooth, 1, grid);
  const Index n = p.samples();
  // tone at 0.9 nyquist: bin ~ 0.45 N
  const double bin = std::round(0.45 * double(n));
  for (Index s = 0; s < n; ++s) {
    p.values(0, s) = std::sin(2.0 * M_PI * bin * double(s) / double(n));
  }
  const Spectrum sp = pulse_spectrum(p, grid);
  const NyquistReport report = nyquist_margin(sp, 0.5);
  CHECK(report.flagged);
  CHECK(report.energy_fraction_above > 0.9);
  CHECK_THROWS_AS(nyquist_margin(sp, 1.5), ConfigError);
}
