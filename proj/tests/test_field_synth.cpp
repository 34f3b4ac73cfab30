#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sphere_trace/field_synth.hpp"

using namespace sphere_trace;

namespace {

// sin(theta)-weighted trapezoid/rectangle quadrature on the uniform grid
double grid_quadrature(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g) {
  const int nt = static_cast<int>(f.rows());
  const int np = static_cast<int>(f.cols());
  const double dtheta = M_PI / (nt - 1);
  const double dphi = 2.0 * M_PI / np;
  double sum = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double w = (i == 0 || i == nt - 1) ? 0.5 : 1.0;  // endpoints carry sin = 0 anyway
    const double theta = M_PI * i / (nt - 1);
    double row = 0.0;
    for (int j = 0; j < np; ++j) row += f(i, j) * g(i, j);
    sum += w * row * std::sin(theta);
  }
  return sum * dtheta * dphi;
}

Eigen::ArrayXd unit_coeff(const ModeLattice& lattice, int ell, int m) {
  Eigen::ArrayXd c = Eigen::ArrayXd::Zero(lattice.mode_count());
  c[mode_rank({ell, m})] = 1.0;
  return c;
}

}  // namespace

TEST_CASE("constant and axial harmonics") {
  ModeLattice lattice{1};
  GridSpec grid{8, 16};
  const Eigen::MatrixXd y00 = evaluate_on_grid(unit_coeff(lattice, 0, 0), lattice, grid);
  const double c = 1.0 / std::sqrt(4.0 * M_PI);
  CHECK(y00.minCoeff() == doctest::Approx(c).epsilon(1e-14));
  CHECK(y00.maxCoeff() == doctest::Approx(c).epsilon(1e-14));

  const Eigen::MatrixXd y10 = evaluate_on_grid(unit_coeff(lattice, 1, 0), lattice, grid);
  CHECK(y10(0, 0) == doctest::Approx(std::sqrt(3.0 / (4.0 * M_PI))).epsilon(1e-14));
}

TEST_CASE("numerical orthonormality of low harmonics") {
  ModeLattice lattice{2};
  GridSpec grid{256, 512};
  const Eigen::MatrixXd y10 = evaluate_on_grid(unit_coeff(lattice, 1, 0), lattice, grid);
  const Eigen::MatrixXd y11 = evaluate_on_grid(unit_coeff(lattice, 1, 1), lattice, grid);
  const Eigen::MatrixXd y22 = evaluate_on_grid(unit_coeff(lattice, 2, -2), lattice, grid);
  CHECK(std::abs(grid_quadrature(y10, y11)) < 1e-6);
  CHECK(std::abs(grid_quadrature(y10, y22)) < 1e-6);
  CHECK(grid_quadrature(y10, y10) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(grid_quadrature(y11, y11) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("parseval on the grid") {
  const int kappa = 32;
  ModeLattice lattice{kappa};
  std::uint64_t state = 5;
  auto next = [&state] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return double(state >> 40) / double(1 << 24) - 0.5;
  };
  Eigen::ArrayXd coeffs(lattice.mode_count());
  for (int k = 0; k < coeffs.size(); ++k) coeffs[k] = next();
  const Eigen::MatrixXd f = evaluate_on_grid(coeffs, lattice, {256, 512});
  const double quad = grid_quadrature(f, f);
  CHECK(quad == doctest::Approx(coeffs.square().sum()).epsilon(1e-4));
}

TEST_CASE("legendre recurrence stays bounded up to degree 128") {
  const int kappa = 128;
  Eigen::ArrayXd values;
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = std::cos(M_PI * i / 400.0);
    legendre_normalized(kappa, x, values);
    for (int ell = 0; ell <= kappa; ++ell) {
      const double bound = std::sqrt((2.0 * ell + 1.0) / (4.0 * M_PI)) * std::sqrt(2.0) * 1.01;
      for (int m = 0; m <= ell; ++m) {
        const double y = std::abs(values[ell * (ell + 1) / 2 + m]) * (m ? std::sqrt(2.0) : 1.0);
        worst = std::max(worst, y / bound);
      }
    }
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("zero and paper initial expectations") {
  ModeLattice l0{0};
  InitialSpec zero;
  CHECK(expected_initial_quantity(QuantityId::WaveEnergy, zero, l0) == 0.0);
  WaveState z = sample_initial_wave(zero, l0, 1, 0);
  CHECK(z.u1[0] == 0.0);
  CHECK(z.u2[0] == 0.0);

  InitialSpec paper;
  paper.kind = InitialSpec::Kind::PaperWave;
  // kappa = 0: E[energy] = (0^(2-2gamma))/2 = 1/2 by the 0^-x = 1 convention
  CHECK(expected_initial_quantity(QuantityId::WaveEnergy, paper, l0) == doctest::Approx(0.5));
  // kappa = 1: 1^x = 1 regardless of gamma, so E = (1 + 3 (1 + 2)) / 2 = 5
  CHECK(expected_initial_quantity(QuantityId::WaveEnergy, paper, {1}) == doctest::Approx(5.0));
}

TEST_CASE("paper initial sampling matches its per-mode law") {
  const int kappa = 2;
  ModeLattice lattice{kappa};
  InitialSpec spec;
  spec.kind = InitialSpec::Kind::PaperWave;
  const int n = 60000;
  Eigen::ArrayXd s1 = Eigen::ArrayXd::Zero(lattice.mode_count());
  Eigen::ArrayXd s2 = Eigen::ArrayXd::Zero(lattice.mode_count());
  Eigen::ArrayXd v1 = Eigen::ArrayXd::Zero(lattice.mode_count());
  Eigen::ArrayXd v2 = Eigen::ArrayXd::Zero(lattice.mode_count());
  for (int s = 0; s < n; ++s) {
    const WaveState state = sample_initial_wave(spec, lattice, 77, s);
    s1 += state.u1; v1 += state.u1.square();
    s2 += state.u2; v2 += state.u2.square();
  }
  int k = 0;
  for (int ell = 0; ell <= kappa; ++ell) {
    const double sd1 = decay_amplitude(ell, spec.gamma);
    const double sd2 = decay_amplitude(ell, spec.gamma - 1.0);
    for (int m = -ell; m <= ell; ++m, ++k) {
      CHECK(std::abs(s1[k] / n) < 5.0 * sd1 / std::sqrt(double(n)));
      CHECK(v1[k] / n == doctest::Approx(sd1 * sd1).epsilon(0.05));
      CHECK(v2[k] / n == doctest::Approx(sd2 * sd2).epsilon(0.05));
    }
  }
  // schrodinger and maxwell reuse the same two-channel law
  const SchrodingerState sc =
      sample_initial_schrodinger({InitialSpec::Kind::PaperSchrodinger}, lattice, 77, 0);
  CHECK(sc.u.size() == lattice.mode_count());
  const MaxwellState mx =
      sample_initial_maxwell({InitialSpec::Kind::PaperMaxwell}, lattice, 77, 0);
  CHECK(mx.e.size() == lattice.mode_count() - 1);
}

TEST_CASE("custom initial data is deterministic") {
  ModeLattice lattice{1};
  InitialSpec spec;
  spec.kind = InitialSpec::Kind::Custom;
  spec.c1 = Eigen::ArrayXd::LinSpaced(4, 1.0, 4.0);
  spec.c2 = Eigen::ArrayXd::Constant(4, -1.0);
  const WaveState a = sample_initial_wave(spec, lattice, 1, 0);
  const WaveState b = sample_initial_wave(spec, lattice, 2, 9);
  CHECK((a.u1 - b.u1).abs().maxCoeff() == 0.0);
  CHECK(a.u1[3] == 4.0);
  // expected quantity equals the evaluated quantity for deterministic data
  CHECK(expected_initial_quantity(QuantityId::WaveEnergy, spec, lattice) ==
        doctest::Approx(evaluate(QuantityId::WaveEnergy, a, lattice)).epsilon(1e-14));
}

TEST_CASE("complex coefficients synthesize channelwise") {
  ModeLattice lattice{1};
  Eigen::ArrayXcd c(4);
  c << std::complex<double>(1.0, 0.5), std::complex<double>(0.0, -1.0),
      std::complex<double>(2.0, 0.0), std::complex<double>(0.0, 0.0);
  GridSpec grid{6, 8};
  const auto [re, im] = evaluate_on_grid(c, lattice, grid);
  const Eigen::MatrixXd re_direct = evaluate_on_grid(Eigen::ArrayXd(c.real()), lattice, grid);
  const Eigen::MatrixXd im_direct = evaluate_on_grid(Eigen::ArrayXd(c.imag()), lattice, grid);
  CHECK((re - re_direct).cwiseAbs().maxCoeff() == 0.0);
  CHECK((im - im_direct).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate grids are rejected") {
  ModeLattice lattice{0};
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(1);
  CHECK_THROWS_AS(evaluate_on_grid(ones, lattice, {1, 16}), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_on_grid(ones, lattice, {8, 3}), std::invalid_argument);
}

TEST_CASE("snapshot format") {
  ModeLattice lattice{0};
  const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(1);
  const Eigen::MatrixXd f = evaluate_on_grid(ones, lattice, {2, 4});
  std::ostringstream os;
  write_snapshot(os, f, 0, 1.5);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# 2 4 0 1.5");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2);
}
