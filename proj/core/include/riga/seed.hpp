#ifndef RIGA_SEED_HPP
#define RIGA_SEED_HPP

#include <cstdint>
#include <string>

#include "riga/pulses.hpp"

namespace riga {

// Random trigonometric seed: M harmonics of period T per channel, with
// coefficients drawn uniformly from [-A_m, A_m], optionally enveloped by the
// Hamming-like window.
struct SeedConfig {
  int harmonics = 3;       // M
  double period = 1.0;     // T
  double amplitude = 0.1;  // A_m
  std::uint64_t rng_seed = 0;
  bool apply_window = true;

  void validate() const {
    if (harmonics < 1) throw ConfigError("seed: M must be >= 1");
    if (!(period > 0.0)) throw ConfigError("seed: T must be positive");
    if (amplitude < 0.0) throw ConfigError("seed: A_m must be nonnegative");
  }
};

// Sine/cosine coefficient tables, one row per channel, one column per harmonic.
struct SeedCoefficients {
  RealMatrix a;
  RealMatrix b;
};

// Draw coefficients deterministically from cfg.rng_seed.
SeedCoefficients draw_seed_coefficients(const SeedConfig& cfg, Index channels);

// u_k(t_s) = [window] * sum_l a_kl sin(2 l pi t_s / T) + b_kl cos(2 l pi t_s / T).
PulseSet seed_from_coefficients(const SeedConfig& cfg, const SeedCoefficients& coeffs,
                                const TimeGrid& grid, PulseMode mode = PulseMode::smooth);

PulseSet generate_seed(const SeedConfig& cfg, Index channels, const TimeGrid& grid,
                       PulseMode mode = PulseMode::smooth);

// JSON round-trip of the {"a": [[...]], "b": [[...]]} coefficient file.
std::string seed_coefficients_to_json(const SeedCoefficients& coeffs);
SeedCoefficients seed_coefficients_from_json(const std::string& text);

}  // namespace riga

#endif
