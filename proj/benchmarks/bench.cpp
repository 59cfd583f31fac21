#include <benchmark/benchmark.h>

#include <random>

#include "riga/driver.hpp"
#include "riga/models.hpp"
#include "riga/unitary.hpp"

using namespace riga;

namespace {

std::mt19937_64 rng(12345);

Matrix random_skew(Index n) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a - a.adjoint().eval());
}

void bm_exp_skew(benchmark::State& state) {
  const Matrix a = random_skew(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_skew(a, 0.05));
  }
}
BENCHMARK(bm_exp_skew)->Arg(8)->Arg(16)->Arg(64)->Arg(256);

void bm_cayley_roundtrip(benchmark::State& state) {
  const Matrix w = random_skew(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cayley_forward(cayley_inverse(w)));
  }
}
BENCHMARK(bm_cayley_roundtrip)->Arg(8)->Arg(16)->Arg(64);

void bm_eigphases(benchmark::State& state) {
  const Matrix u = cayley_inverse(random_skew(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigphases(u));
  }
}
BENCHMARK(bm_eigphases)->Arg(8)->Arg(16)->Arg(64);

void bm_smooth_open_pass(benchmark::State& state) {
  const int nq = static_cast<int>(state.range(0));
  const auto chain = build_qubit_chain(QubitChainParams::defaults(nq));
  const TimeGrid grid(2.0 * nq, 20 * nq);
  SeedConfig sc;
  sc.harmonics = 8;
  sc.period = M_PI * grid.t_final;
  sc.amplitude = 0.2;
  const PulseSet pulses = generate_seed(sc, chain.system.channels(), grid);
  const Matrix id = Matrix::Identity(chain.system.dim(), chain.system.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_smooth_open(chain.system, pulses, grid, id));
  }
  state.SetLabel("n=" + std::to_string(chain.system.dim()));
}
BENCHMARK(bm_smooth_open_pass)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_riga_step(benchmark::State& state) {
  const int nq = static_cast<int>(state.range(0));
  const auto chain = build_qubit_chain(QubitChainParams::defaults(nq));
  RigaConfig cfg;
  cfg.gain = 10.0 / (2.0 * M_PI * 0.1);
  cfg.t_final = 2.0 * nq;
  cfg.steps = 20 * nq;
  cfg.max_steps = 1;
  cfg.target_infidelity = 1e-12;
  cfg.allow_phase = false;
  cfg.shaping.saturation = SaturationKind::smooth;
  cfg.shaping.u_max = 5.0;
  cfg.seed.harmonics = 10;
  cfg.seed.period = M_PI * cfg.t_final;
  cfg.seed.amplitude = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_riga(chain.system, chain.gate, cfg));
  }
  state.SetLabel("n=" + std::to_string(chain.system.dim()));
}
BENCHMARK(bm_riga_step)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
