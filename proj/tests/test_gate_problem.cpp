#include <doctest.h>

#include "riga/problem.hpp"
#include "riga/unitary.hpp"
#include "test_support.hpp"

using namespace riga;
using namespace riga::testing;

namespace {

GateSpec random_spec(Index n, Index nbar, std::mt19937_64& rng) {
  GateSpec spec;
  spec.e = random_isometry(n, nbar, rng);
  spec.f = random_isometry(n, nbar, rng);
  return spec;
}

}  // namespace

TEST_CASE("infidelity endpoints and phase invariance") {
  std::mt19937_64 rng(21);
  GateSpec same;
  same.e = random_isometry(5, 2, rng);
  same.f = same.e;
  CHECK(infidelity(Matrix::Identity(5, 5), same) == doctest::Approx(0.0).epsilon(1e-12));

  // F orthogonal to X E gives zero trace, infidelity one
  GateSpec spec;
  Matrix u = random_unitary(4, rng);
  spec.e = u.leftCols(2);
  spec.f = u.rightCols(2);
  CHECK(infidelity(Matrix::Identity(4, 4), spec) == doctest::Approx(1.0).epsilon(1e-12));

  const GateSpec rnd = random_spec(6, 3, rng);
  const Matrix x = random_unitary(6, rng);
  const Matrix shifted = std::polar(1.0, 0.7) * x;
  CHECK(infidelity(shifted, rnd) == doctest::Approx(infidelity(x, rnd)).epsilon(1e-12));
}

TEST_CASE("infidelity zero exactly at realized gates, tied to the partial Lyapunov") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const GateSpec spec = random_spec(6, 2, rng);
    const Matrix x_goal = spec.nominal_goal();
    CHECK((x_goal * spec.e - spec.f).norm() < 1e-12);
    // a propagator realizing the gate up to phase
    const double phi = 0.37;
    const Matrix x = std::polar(1.0, phi) * x_goal;
    CHECK(infidelity(x, spec) < 1e-12);
    // ... and V(X_goal^dag X) vanishes after removing the optimal phase
    const Matrix xt = (std::polar(1.0, -phi) * x_goal.adjoint() * x).eval();
    CHECK(lyapunov_partial(xt, spec.e) < 1e-8);
    // a random propagator has positive infidelity and positive V
    const Matrix y = random_unitary(6, rng);
    CHECK(infidelity(y, spec) > 1e-3);
    CHECK(lyapunov_partial(x_goal.adjoint() * y, spec.e) > 1e-3);
  }
}

TEST_CASE("lyapunov_partial equals the squared block distance") {
  std::mt19937_64 rng(23);
  const Matrix e2 = random_isometry(5, 2, rng);
  CHECK(lyapunov_partial(Matrix::Identity(5, 5), e2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lyapunov_partial((-Matrix::Identity(5, 5)).eval(), e2) ==
        doctest::Approx(8.0).epsilon(1e-12));

  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 4 + trial % 3;
    const Matrix e = random_isometry(n, 2, rng);
    const Matrix xt = random_unitary(n, rng);
    const double direct = ((xt - Matrix::Identity(n, n)) * e).squaredNorm();
    CHECK(lyapunov_partial(xt, e) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(lyapunov_partial(xt, e) >= -1e-12);
    CHECK(lyapunov_partial(xt, e) <= 8.0 + 1e-12);
  }
}

TEST_CASE("critical points of the partial trace sit at V = 4 n_c") {
  std::mt19937_64 rng(24);
  const Index n = 6, nbar = 2;
  // error matrix block-diagonal in an adapted basis with E-block eigenvalues +-1
  const Matrix e = random_isometry(n, nbar, rng);
  const Matrix xe = complete_isometry(e);
  for (int n_c = 0; n_c <= 2; ++n_c) {
    Vector d = Vector::Ones(n);
    for (int i = 0; i < n_c; ++i) d(i) = -1.0;
    Matrix w = d.asDiagonal();
    const Matrix xt = xe * w * xe.adjoint();
    CHECK(lyapunov_partial(xt, e) == doctest::Approx(4.0 * n_c).epsilon(1e-9));
  }
}

TEST_CASE("lyapunov_full: trace formula equals the spectral tangent sum") {
  std::mt19937_64 rng(25);
  CHECK(lyapunov_full(Matrix::Identity(4, 4)) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix d2(2, 2);
  d2 << std::polar(1.0, M_PI / 2), 0, 0, 1;
  CHECK(lyapunov_full(d2) == doctest::Approx(1.0).epsilon(1e-10));

  for (int trial = 0; trial < 50; ++trial) {
    const Matrix xt = random_unitary_bounded_phases(5, 2.5, rng);
    auto d = eigphases(xt);
    double spectral = 0.0;
    for (Index i = 0; i < d.phases.size(); ++i) {
      const double t = std::tan(0.5 * d.phases(i));
      spectral += t * t;
    }
    CHECK(lyapunov_full(xt) == doctest::Approx(spectral).epsilon(1e-8));
  }

  std::mt19937_64 rng2(26);
  Matrix v = random_unitary(3, rng2);
  Vector d(3);
  d << std::polar(1.0, M_PI), 1.0, 1.0;
  CHECK_THROWS_AS(lyapunov_full((v * d.asDiagonal() * v.adjoint()).eval()), SingularAtMinusOne);
}

TEST_CASE("feedback_partial equals minus the gradient of the partial Lyapunov") {
  std::mt19937_64 rng(27);
  const Index n = 5, nbar = 2;
  const Matrix e = random_isometry(n, nbar, rng);

  // identity error: the trace of a conjugated skew generator is imaginary
  const Matrix s0 = random_skew_hermitian(n, rng);
  CHECK(feedback_partial(Matrix::Identity(n, n), s0, e, 2.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // zero window annihilates the law
  const Matrix xt0 = random_unitary(n, rng);
  CHECK(feedback_partial(xt0, s0, e, 2.0, 0.0) == 0.0);

  for (int trial = 0; trial < 25; ++trial) {
    const Matrix xt = random_unitary(n, rng);
    const Matrix st = random_skew_hermitian(n, rng);
    const double gain = 0.5 + trial * 0.1;
    const double fd = directional_derivative(
        [&](const Matrix& y) { return lyapunov_partial(y, e); }, xt, st);
    const double fb = feedback_partial(xt, st, e, gain);
    CHECK(fb == doctest::Approx(-gain * fd).epsilon(1e-6));
    // bound from the error family: |u| <= 2 K ||S|| sqrt(V)
    CHECK(std::abs(fb) <=
          2.0 * gain * st.norm() * std::sqrt(lyapunov_partial(xt, e)) + 1e-9);
  }
}

TEST_CASE("feedback_full: gradient factor, Cayley route, finite differences") {
  std::mt19937_64 rng(28);
  const Index n = 4;
  CHECK(feedback_full(Matrix::Identity(n, n), random_skew_hermitian(n, rng), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int trial = 0; trial < 25; ++trial) {
    const Matrix xt = random_unitary_bounded_phases(n, 2.2, rng);
    const Matrix st = random_skew_hermitian(n, rng);
    const double gain = 1.0 + trial * 0.2;

    // z(W) route evaluated at the minus-Cayley image agrees with Z(Xt)
    const Matrix w_minus = (-cayley_forward(xt)).eval();
    const Matrix z_direct = lyapunov_full_gradient_factor(xt);
    const Matrix z_cayley = lyapunov_full_gradient_factor_cayley(w_minus);
    CHECK((z_direct - z_cayley).norm() < 1e-10 * std::max(1.0, z_direct.norm()));

    // the printed law K trace(Z St) carries 1/4 of the canonical gradient gain
    const double fd = directional_derivative(
        [&](const Matrix& y) { return lyapunov_full(y); }, xt, st);
    const double fb = feedback_full(xt, st, gain);
    CHECK(fb == doctest::Approx(-(gain / 4.0) * fd).epsilon(1e-6));
    // dissipative either way
    CHECK(fb * fd <= 1e-12);
  }
}

TEST_CASE("window_hamming endpoints, midpoint, quarter value") {
  const double tf = 7.0;
  CHECK(window_hamming(0.0, tf) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(window_hamming(tf, tf) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(window_hamming(tf / 2, tf) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(window_hamming(tf / 4, tf) == doctest::Approx(0.5).epsilon(1e-12));
  // zero slope at the endpoints
  const double h = 1e-6;
  CHECK(std::abs(window_hamming(h, tf) - window_hamming(0.0, tf)) / h < 1e-4);
  CHECK(std::abs(window_hamming(tf, tf) - window_hamming(tf - h, tf)) / h < 1e-4);
}

TEST_CASE("smooth_sat is odd, bounded, linear at the origin") {
  const double u_star = 0.8;
  CHECK(smooth_sat(0.0, u_star) == 0.0);
  CHECK(smooth_sat(100.0 * u_star, u_star) > 0.98 * u_star);
  CHECK(smooth_sat(100.0 * u_star, u_star) < u_star);
  const double x = 0.37 * u_star;
  CHECK(smooth_sat(-x, u_star) == doctest::Approx(-smooth_sat(x, u_star)).epsilon(1e-15));
  CHECK(smooth_sat(1e-8, u_star) / 1e-8 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("saturation_policy stays inside the band and keeps the feedback sign") {
  CHECK(saturation_policy(0.0, 0.0, 1.0) == 0.0);

  const double pushed = saturation_policy(0.9, 10.0, 1.0);
  CHECK(pushed > 0.9);
  CHECK(pushed < 1.0);

  // small-signal linearity on the wide side
  CHECK(saturation_policy(0.5, -0.01, 1.0) == doctest::Approx(0.49).epsilon(1e-4));

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ubar(-1.0, 1.0);
  std::uniform_real_distribution<double> util(-50.0, 50.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double b = ubar(rng);
    const double t = util(rng);
    const double out = saturation_policy(b, t, 1.0);
    CHECK(std::abs(out) <= 1.0);
    if (t > 1e-12) CHECK(out >= b);
    if (t < -1e-12) CHECK(out <= b);
  }
  CHECK_THROWS_AS(saturation_policy(1.5, 0.1, 1.0), SeedOutOfBounds);
}
