#include <doctest.h>

#include <cmath>

#include "sphere_trace/integrators.hpp"
#include "sphere_trace/quantities.hpp"

using namespace sphere_trace;

namespace {

// deterministic uniforms for the random-triple checks
struct Lcg {
  std::uint64_t state = 99;
  double next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return double(state >> 40) / double(1 << 24);
  }
};

}  // namespace

TEST_CASE("wave propagator entries") {
  const Propagator2x2 exp0 = wave_propagator(0.0, 0.1, SchemeId::ExpEuler);
  CHECK(exp0.r11 == doctest::Approx(1.0));
  CHECK(exp0.r12 == doctest::Approx(0.1));
  CHECK(exp0.r21 == doctest::Approx(0.0));
  CHECK(exp0.r22 == doctest::Approx(1.0));

  const Propagator2x2 fem = wave_propagator(2.0, 0.1, SchemeId::ForwardEM);
  CHECK(fem.r11 == 1.0);
  CHECK(fem.r12 == 0.1);
  CHECK(fem.r21 == doctest::Approx(-0.2));
  CHECK(fem.r22 == 1.0);

  // backward map is the exact 2x2 inverse of [[1,-tau],[tau lambda,1]]
  const double tau = 0.1, lambda = 2.0;
  const double det = 1.0 + tau * tau * lambda;
  const Propagator2x2 bem = wave_propagator(lambda, tau, SchemeId::BackwardEM);
  CHECK(bem.r11 == doctest::Approx(1.0 / det).epsilon(1e-15));
  CHECK(bem.r12 == doctest::Approx(tau / det).epsilon(1e-15));
  CHECK(bem.r21 == doctest::Approx(-tau * lambda / det).epsilon(1e-15));
  CHECK(bem.r22 == doctest::Approx(1.0 / det).epsilon(1e-15));
}

TEST_CASE("wave step examples") {
  ModeLattice lattice{1};
  WaveState state;
  state.u1.setZero(4);
  state.u2.setZero(4);
  state.u1[1] = 1.0;  // an ell=1 mode, lambda = 2
  Eigen::ArrayXd noise = Eigen::ArrayXd::Zero(4);

  WaveState out = wave_step(state, SchemeId::ForwardEM, 0.1, noise);
  CHECK(out.u1[1] == doctest::Approx(1.0));
  CHECK(out.u2[1] == doctest::Approx(-0.2));

  WaveState zero;
  zero.u1.setZero(4);
  zero.u2.setZero(4);
  WaveState zout = wave_step(zero, SchemeId::ExpEuler, 0.1, noise);
  CHECK(zout.u1.abs().maxCoeff() == 0.0);
  CHECK(zout.u2.abs().maxCoeff() == 0.0);
}

TEST_CASE("exp scheme rotation periodicity") {
  // omega tau summing to 2 pi returns the mode to its start
  const double lambda = 2.0;
  const double omega = std::sqrt(lambda);
  const int n = 100;
  const double tau = 2.0 * M_PI / (omega * n);
  ModeLattice lattice{1};
  WaveStepper stepper(lattice, SchemeId::ExpEuler, tau);
  WaveState state;
  state.u1.setZero(4);
  state.u2.setZero(4);
  state.u1[2] = 1.0;
  const Eigen::ArrayXd noise = Eigen::ArrayXd::Zero(4);
  for (int i = 0; i < n; ++i) stepper.step(state, noise);
  CHECK(state.u1[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(state.u2[2]) < 1e-10);
}

TEST_CASE("schrodinger step examples") {
  ModeLattice lattice{1};
  SchrodingerState state;
  state.u.setZero(4);
  state.u[1] = 1.0;  // lambda = 2
  Eigen::ArrayXcd noise = Eigen::ArrayXcd::Zero(4);

  auto fem = schrodinger_step(state, SchemeId::ForwardEM, 0.1, noise);
  CHECK(fem.u[1].real() == doctest::Approx(1.0));
  CHECK(fem.u[1].imag() == doctest::Approx(0.2));

  auto exp = schrodinger_step(state, SchemeId::ExpEuler, 0.1, noise);
  CHECK(exp.u[1].real() == doctest::Approx(std::cos(0.2)));
  CHECK(exp.u[1].imag() == doctest::Approx(std::sin(0.2)));
  CHECK(std::abs(exp.u[1]) == doctest::Approx(1.0).epsilon(1e-14));

  auto bem = schrodinger_step(state, SchemeId::BackwardEM, 0.1, noise);
  CHECK(std::norm(bem.u[1]) == doctest::Approx(1.0 / (1.0 + 0.01 * 4.0)).epsilon(1e-14));

  CHECK_THROWS_AS(schrodinger_step(state, SchemeId::AdaptedExpEuler, 0.1, noise),
                  std::invalid_argument);
}

TEST_CASE("maxwell step examples") {
  ModeLattice lattice{1};
  MaxwellState state;
  state.e.setZero(3);
  state.h.setZero(3);
  state.e[0] = 1.0;  // first ell=1 mode, lambda = 2
  Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(4);

  // quarter rotation: sqrt(2) tau = pi/2
  const double tau = M_PI / (2.0 * std::sqrt(2.0));
  MaxwellState quarter = maxwell_step(state, SchemeId::ExpEuler, tau, zero, zero);
  CHECK(std::abs(quarter.e[0]) < 1e-12);
  CHECK(quarter.h[0] == doctest::Approx(1.0).epsilon(1e-12));

  MaxwellState znull;
  znull.e.setZero(3);
  znull.h.setZero(3);
  MaxwellState zout = maxwell_step(znull, SchemeId::ForwardEM, 0.1, zero, zero);
  CHECK(zout.e.abs().maxCoeff() == 0.0);
  CHECK(zout.h.abs().maxCoeff() == 0.0);
  CHECK(zout.e0 == 0.0);

  // forward map multiplies e^2 + h^2 by exactly 1 + lambda tau^2
  const double t2 = 0.1;
  MaxwellState fwd = maxwell_step(state, SchemeId::ForwardEM, t2, zero, zero);
  const double before = state.e[0] * state.e[0] + state.h[0] * state.h[0];
  const double after = fwd.e[0] * fwd.e[0] + fwd.h[0] * fwd.h[0];
  CHECK(after == doctest::Approx((1.0 + 2.0 * t2 * t2) * before).epsilon(1e-14));

  CHECK_THROWS_AS(maxwell_step(state, SchemeId::AdaptedExpEuler, 0.1, zero, zero),
                  std::invalid_argument);
}

TEST_CASE("monopole channels integrate the noise directly") {
  MaxwellState state;
  state.e.setZero(3);
  state.h.setZero(3);
  state.e0 = 0.5;
  Eigen::ArrayXd ne = Eigen::ArrayXd::Zero(4), nh = Eigen::ArrayXd::Zero(4);
  ne[0] = 0.25;
  nh[0] = -1.0;
  for (SchemeId scheme : {SchemeId::ForwardEM, SchemeId::BackwardEM, SchemeId::ExpEuler}) {
    MaxwellState out = maxwell_step(state, scheme, 0.3, ne, nh);
    CHECK(out.e0 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(out.h0 == doctest::Approx(-1.0).epsilon(1e-15));
  }
}

TEST_CASE("pathwise energy multipliers on random triples") {
  Lcg rng;
  for (int trial = 0; trial < 100; ++trial) {
    const double lambda = 0.1 + 300.0 * rng.next();
    const double tau = 0.001 + 0.5 * rng.next();
    const double u1 = 2.0 * rng.next() - 1.0;
    const double u2 = 2.0 * rng.next() - 1.0;
    const double factor = 1.0 + tau * tau * lambda;

    auto energy = [&](const Propagator2x2& p) {
      const double a = p.r11 * u1 + p.r12 * u2;
      const double b = p.r21 * u1 + p.r22 * u2;
      return 0.5 * (b * b + lambda * a * a);
    };
    const double e0 = 0.5 * (u2 * u2 + lambda * u1 * u1);
    CHECK(energy(wave_propagator(lambda, tau, SchemeId::ForwardEM)) ==
          doctest::Approx(factor * e0).epsilon(1e-12));
    CHECK(energy(wave_propagator(lambda, tau, SchemeId::BackwardEM)) ==
          doctest::Approx(e0 / factor).epsilon(1e-12));
    CHECK(energy(wave_propagator(lambda, tau, SchemeId::ExpEuler)) ==
          doctest::Approx(e0).epsilon(1e-12));

    auto norm2 = [&](const Propagator2x2& p) {
      const double a = p.r11 * u1 + p.r12 * u2;
      const double b = p.r21 * u1 + p.r22 * u2;
      return 0.5 * (a * a + b * b);
    };
    const double m0 = 0.5 * (u1 * u1 + u2 * u2);
    CHECK(norm2(maxwell_propagator(lambda, tau, SchemeId::ForwardEM)) ==
          doctest::Approx(factor * m0).epsilon(1e-12));
    CHECK(norm2(maxwell_propagator(lambda, tau, SchemeId::BackwardEM)) ==
          doctest::Approx(m0 / factor).epsilon(1e-12));
    CHECK(norm2(maxwell_propagator(lambda, tau, SchemeId::ExpEuler)) ==
          doctest::Approx(m0).epsilon(1e-12));

    // Schrodinger mass multipliers
    const std::complex<double> u(u1, u2);
    const double mass = std::norm(u);
    const double mfac = 1.0 + tau * tau * lambda * lambda;
    const std::complex<double> f = std::complex<double>(1.0, tau * lambda) * u;
    CHECK(std::norm(f) == doctest::Approx(mfac * mass).epsilon(1e-12));
    const std::complex<double> b = u / std::complex<double>(1.0, -tau * lambda);
    CHECK(std::norm(b) == doctest::Approx(mass / mfac).epsilon(1e-12));
    const std::complex<double> e =
        std::complex<double>(std::cos(tau * lambda), std::sin(tau * lambda)) * u;
    CHECK(std::norm(e) == doctest::Approx(mass).epsilon(1e-12));
  }
}

TEST_CASE("exp propagators preserve the energy form") {
  Lcg rng;
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = 400.0 * rng.next();
    const double tau = 0.001 + 0.4 * rng.next();
    const Propagator2x2 w = wave_propagator(lambda, tau, SchemeId::ExpEuler);
    // P^T D P = D with D = diag(lambda, 1)
    CHECK(lambda * w.r11 * w.r11 + w.r21 * w.r21 == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(lambda * w.r12 * w.r12 + w.r22 * w.r22 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambda * w.r11 * w.r12 + w.r21 * w.r22 == doctest::Approx(0.0).epsilon(1e-12));

    const Propagator2x2 m = maxwell_propagator(lambda, tau, SchemeId::ExpEuler);
    CHECK(m.r11 * m.r11 + m.r21 * m.r21 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.r12 * m.r12 + m.r22 * m.r22 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.r11 * m.r12 + m.r21 * m.r22 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.r11 * m.r22 - m.r12 * m.r21 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("one-step maps are linear in state and noise") {
  Lcg rng;
  ModeLattice lattice{2};
  const int n = lattice.mode_count();
  auto rand_arr = [&](int size) {
    return Eigen::ArrayXd::NullaryExpr(size, [&](Eigen::Index) { return 2.0 * rng.next() - 1.0; });
  };
  for (SchemeId scheme : {SchemeId::ForwardEM, SchemeId::BackwardEM, SchemeId::ExpEuler}) {
    WaveState x, y;
    x.u1 = rand_arr(n); x.u2 = rand_arr(n);
    y.u1 = rand_arr(n); y.u2 = rand_arr(n);
    const Eigen::ArrayXd n1 = rand_arr(n), n2 = rand_arr(n);
    const double a = 0.7, b = -1.3;

    WaveState combo;
    combo.u1 = a * x.u1 + b * y.u1;
    combo.u2 = a * x.u2 + b * y.u2;
    const WaveState lhs = wave_step(combo, scheme, 0.21, a * n1 + b * n2);
    const WaveState sx = wave_step(x, scheme, 0.21, n1);
    const WaveState sy = wave_step(y, scheme, 0.21, n2);
    CHECK((lhs.u1 - (a * sx.u1 + b * sy.u1)).abs().maxCoeff() < 1e-12);
    CHECK((lhs.u2 - (a * sx.u2 + b * sy.u2)).abs().maxCoeff() < 1e-12);

    SchrodingerState p, q;
    p.u = (rand_arr(n) + std::complex<double>(0, 1) * rand_arr(n)).eval();
    q.u = (rand_arr(n) + std::complex<double>(0, 1) * rand_arr(n)).eval();
    const Eigen::ArrayXcd m1 = rand_arr(n), m2 = rand_arr(n);
    SchrodingerState pcombo;
    pcombo.u = a * p.u + b * q.u;
    const SchrodingerState clhs = schrodinger_step(pcombo, scheme, 0.21, a * m1 + b * m2);
    const SchrodingerState sp = schrodinger_step(p, scheme, 0.21, m1);
    const SchrodingerState sq = schrodinger_step(q, scheme, 0.21, m2);
    CHECK((clhs.u - (a * sp.u + b * sq.u)).abs().maxCoeff() < 1e-12);

    MaxwellState mx, my;
    mx.e = rand_arr(n - 1); mx.h = rand_arr(n - 1); mx.e0 = rng.next(); mx.h0 = rng.next();
    my.e = rand_arr(n - 1); my.h = rand_arr(n - 1); my.e0 = rng.next(); my.h0 = rng.next();
    const Eigen::ArrayXd ke1 = rand_arr(n), kh1 = rand_arr(n);
    const Eigen::ArrayXd ke2 = rand_arr(n), kh2 = rand_arr(n);
    MaxwellState mcombo;
    mcombo.e = a * mx.e + b * my.e;
    mcombo.h = a * mx.h + b * my.h;
    mcombo.e0 = a * mx.e0 + b * my.e0;
    mcombo.h0 = a * mx.h0 + b * my.h0;
    const MaxwellState mlhs =
        maxwell_step(mcombo, scheme, 0.21, a * ke1 + b * ke2, a * kh1 + b * kh2);
    const MaxwellState smx = maxwell_step(mx, scheme, 0.21, ke1, kh1);
    const MaxwellState smy = maxwell_step(my, scheme, 0.21, ke2, kh2);
    CHECK((mlhs.e - (a * smx.e + b * smy.e)).abs().maxCoeff() < 1e-12);
    CHECK((mlhs.h - (a * smx.h + b * smy.h)).abs().maxCoeff() < 1e-12);
    CHECK(mlhs.e0 == doctest::Approx(a * smx.e0 + b * smy.e0).epsilon(1e-12));
    CHECK(mlhs.h0 == doctest::Approx(a * smx.h0 + b * smy.h0).epsilon(1e-12));
  }
}

TEST_CASE("small-omega branch avoids cancellation") {
  CHECK(sinc_omega(0.0, 0.25) == 0.25);
  CHECK(one_minus_cos_over_lambda(0.0, 0.25) == doctest::Approx(0.03125));
  // continuity across the series threshold; the reference uses the stable
  // half-angle form 1 - cos x = 2 sin^2(x/2)
  const double tau = 1.0;
  for (double omega : {1e-5, 9.9e-5, 1.01e-4, 1e-3}) {
    const double x = omega * tau;
    CHECK(sinc_omega(omega, tau) == doctest::Approx(std::sin(x) / omega).epsilon(1e-12));
    const double stable = 2.0 * std::sin(0.5 * x) * std::sin(0.5 * x) / (omega * omega);
    CHECK(one_minus_cos_over_lambda(omega, tau) == doctest::Approx(stable).epsilon(1e-10));
  }
}

TEST_CASE("adapted scheme reduces to the plain exponential scheme at zero mean") {
  ModeLattice lattice{2};
  const int n = lattice.mode_count();
  WaveStepper adapted(lattice, SchemeId::AdaptedExpEuler, 0.2, Eigen::ArrayXd::Zero(n));
  WaveStepper plain(lattice, SchemeId::ExpEuler, 0.2);
  WaveState a, b;
  a.u1 = Eigen::ArrayXd::LinSpaced(n, -1.0, 1.0);
  a.u2 = Eigen::ArrayXd::LinSpaced(n, 0.5, 2.0);
  b = a;
  Eigen::ArrayXd noise = Eigen::ArrayXd::Constant(n, 0.3);
  adapted.step(a, noise);
  plain.step(b, noise);
  CHECK((a.u1 - b.u1).abs().maxCoeff() == 0.0);
  CHECK((a.u2 - b.u2).abs().maxCoeff() == 0.0);
}
