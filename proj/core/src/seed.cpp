#include "riga/seed.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "riga/problem.hpp"

namespace riga {

SeedCoefficients draw_seed_coefficients(const SeedConfig& cfg, Index channels) {
  cfg.validate();
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> dist(-cfg.amplitude, cfg.amplitude);
  SeedCoefficients c;
  c.a.resize(channels, cfg.harmonics);
  c.b.resize(channels, cfg.harmonics);
  for (Index k = 0; k < channels; ++k) {
    for (int l = 0; l < cfg.harmonics; ++l) c.a(k, l) = dist(rng);
  }
  for (Index k = 0; k < channels; ++k) {
    for (int l = 0; l < cfg.harmonics; ++l) c.b(k, l) = dist(rng);
  }
  return c;
}

PulseSet seed_from_coefficients(const SeedConfig& cfg, const SeedCoefficients& coeffs,
                                const TimeGrid& grid, PulseMode mode) {
  cfg.validate();
  const Index m = coeffs.a.rows();
  if (coeffs.b.rows() != m || coeffs.a.cols() != cfg.harmonics ||
      coeffs.b.cols() != cfg.harmonics) {
    throw DimensionMismatch("seed: coefficient table shape mismatch");
  }
  PulseSet out = PulseSet::zero(mode, m, grid);
  const int first = mode == PulseMode::smooth ? 0 : 1;
  for (int s = first; s <= grid.steps; ++s) {
    const double t = grid.time(s);
    const double w = cfg.apply_window ? window_hamming(t, grid.t_final) : 1.0;
    const Index col = mode == PulseMode::smooth ? s : s - 1;
    for (Index k = 0; k < m; ++k) {
      double v = 0.0;
      for (int l = 1; l <= cfg.harmonics; ++l) {
        const double arg = 2.0 * l * M_PI * t / cfg.period;
        v += coeffs.a(k, l - 1) * std::sin(arg) + coeffs.b(k, l - 1) * std::cos(arg);
      }
      out.values(k, col) = w * v;
    }
  }
  return out;
}

PulseSet generate_seed(const SeedConfig& cfg, Index channels, const TimeGrid& grid,
                       PulseMode mode) {
  return seed_from_coefficients(cfg, draw_seed_coefficients(cfg, channels), grid, mode);
}

std::string seed_coefficients_to_json(const SeedCoefficients& coeffs) {
  nlohmann::json j;
  auto fill = [](const RealMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  j["a"] = fill(coeffs.a);
  j["b"] = fill(coeffs.b);
  return j.dump(2);
}

SeedCoefficients seed_coefficients_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto read = [](const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty()) throw ConfigError("seed file: expected nonempty array");
    RealMatrix m(rows.size(), rows.front().size());
    for (Index r = 0; r < m.rows(); ++r) {
      const auto& row = rows[static_cast<size_t>(r)];
      if (static_cast<Index>(row.size()) != m.cols()) {
        throw ConfigError("seed file: ragged coefficient rows");
      }
      for (Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<size_t>(c)].get<double>();
    }
    return m;
  };
  SeedCoefficients out;
  out.a = read(j.at("a"));
  out.b = read(j.at("b"));
  if (out.a.rows() != out.b.rows() || out.a.cols() != out.b.cols()) {
    throw ConfigError("seed file: a and b shapes differ");
  }
  return out;
}

}  // namespace riga
