#include "sphere_trace/field_synth.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sphere_trace/levy.hpp"

namespace sphere_trace {

namespace {

// Per-rank standard deviations of the two channels for the Paper* recipes.
void paper_sigmas(const InitialSpec& spec, const ModeLattice& lattice, Eigen::ArrayXd& s1,
                  Eigen::ArrayXd& s2) {
  const int n = lattice.mode_count();
  s1.resize(n);
  s2.resize(n);
  int k = 0;
  for (int ell = 0; ell <= lattice.kappa; ++ell) {
    const double a1 = decay_amplitude(ell, spec.gamma);
    const double a2 = decay_amplitude(ell, spec.gamma - 1.0);
    for (int m = -ell; m <= ell; ++m, ++k) {
      s1[k] = a1;
      s2[k] = a2;
    }
  }
}

void check_custom(const InitialSpec& spec, const ModeLattice& lattice) {
  if (spec.c1.size() != lattice.mode_count() || spec.c2.size() != lattice.mode_count())
    throw std::invalid_argument("custom initial coefficients must have (kappa+1)^2 entries");
}

void fill_gaussian_pair(const InitialSpec& spec, const ModeLattice& lattice,
                        std::uint64_t seed, std::uint32_t sample, Eigen::ArrayXd& x1,
                        Eigen::ArrayXd& x2) {
  Eigen::ArrayXd s1, s2;
  paper_sigmas(spec, lattice, s1, s2);
  const int n = lattice.mode_count();
  x1.resize(n);
  x2.resize(n);
  for (int k = 0; k < n; ++k) {
    x1[k] = s1[k] * detail::initial_normal(seed, sample, k, 0);
    x2[k] = s2[k] * detail::initial_normal(seed, sample, k, 1);
  }
}

}  // namespace

WaveState sample_initial_wave(const InitialSpec& spec, const ModeLattice& lattice,
                              std::uint64_t seed, std::uint32_t sample) {
  WaveState state;
  const int n = lattice.mode_count();
  switch (spec.kind) {
    case InitialSpec::Kind::Zero:
      state.u1.setZero(n);
      state.u2.setZero(n);
      return state;
    case InitialSpec::Kind::Custom:
      check_custom(spec, lattice);
      state.u1 = spec.c1;
      state.u2 = spec.c2;
      return state;
    default:
      fill_gaussian_pair(spec, lattice, seed, sample, state.u1, state.u2);
      return state;
  }
}

SchrodingerState sample_initial_schrodinger(const InitialSpec& spec, const ModeLattice& lattice,
                                            std::uint64_t seed, std::uint32_t sample) {
  SchrodingerState state;
  const int n = lattice.mode_count();
  if (spec.kind == InitialSpec::Kind::Zero) {
    state.u.setZero(n);
    return state;
  }
  Eigen::ArrayXd re, im;
  if (spec.kind == InitialSpec::Kind::Custom) {
    check_custom(spec, lattice);
    re = spec.c1;
    im = spec.c2;
  } else {
    fill_gaussian_pair(spec, lattice, seed, sample, re, im);
  }
  state.u.resize(n);
  state.u.real() = re;
  state.u.imag() = im;
  return state;
}

MaxwellState sample_initial_maxwell(const InitialSpec& spec, const ModeLattice& lattice,
                                    std::uint64_t seed, std::uint32_t sample) {
  MaxwellState state;
  const int n = lattice.mode_count();
  Eigen::ArrayXd e, h;
  switch (spec.kind) {
    case InitialSpec::Kind::Zero:
      e.setZero(n);
      h.setZero(n);
      break;
    case InitialSpec::Kind::Custom:
      check_custom(spec, lattice);
      e = spec.c1;
      h = spec.c2;
      break;
    default:
      fill_gaussian_pair(spec, lattice, seed, sample, e, h);
      break;
  }
  state.e0 = e[0];
  state.h0 = h[0];
  state.e = e.tail(n - 1);
  state.h = h.tail(n - 1);
  return state;
}

InitialMoments initial_moments(QuantityId quantity, const InitialSpec& spec,
                               const ModeLattice& lattice) {
  InitialMoments out;
  const int n = lattice.mode_count();
  out.q.setZero(n);
  if (spec.kind == InitialSpec::Kind::Zero) return out;

  const Eigen::ArrayXd lam = mode_eigenvalues(lattice);
  Eigen::ArrayXd v1(n), v2(n);  // per-channel second moments
  if (spec.kind == InitialSpec::Kind::Custom) {
    check_custom(spec, lattice);
    v1 = spec.c1.square();
    v2 = spec.c2.square();
    out.mean1 = spec.c1;
    out.mean2 = spec.c2;
  } else {
    Eigen::ArrayXd s1, s2;
    paper_sigmas(spec, lattice, s1, s2);
    v1 = s1.square();
    v2 = s2.square();
  }
  switch (quantity) {
    case QuantityId::WaveEnergy:
      out.q = 0.5 * (v2 + lam * v1);
      break;
    case QuantityId::SchrodingerMass:
    case QuantityId::SchrodingerEnergy:
      out.q = v1 + v2;  // E|u|^2; the energy recursion weights by lambda itself
      break;
    case QuantityId::MaxwellEnergy:
      out.q = 0.5 * (v1 + v2);
      break;
  }
  return out;
}

double expected_initial_quantity(QuantityId quantity, const InitialSpec& spec,
                                 const ModeLattice& lattice) {
  const InitialMoments m = initial_moments(quantity, spec, lattice);
  if (quantity == QuantityId::SchrodingerEnergy)
    return (mode_eigenvalues(lattice) * m.q).sum();
  return m.q.sum();
}

void legendre_normalized(int kappa, double x, Eigen::ArrayXd& out) {
  if (std::abs(x) > 1.0) throw std::invalid_argument("legendre argument outside [-1,1]");
  const int size = (kappa + 1) * (kappa + 2) / 2;
  out.resize(size);
  auto at = [&out](int ell, int m) -> double& { return out[ell * (ell + 1) / 2 + m]; };
  const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin(theta)
  at(0, 0) = std::sqrt(1.0 / (4.0 * M_PI));
  if (kappa == 0) return;
  // diagonal seed (Condon-Shortley phase), then raise ell at fixed m
  for (int m = 1; m <= kappa; ++m)
    at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * at(m - 1, m - 1);
  for (int m = 0; m < kappa; ++m) at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * at(m, m);
  for (int m = 0; m <= kappa; ++m) {
    for (int ell = m + 2; ell <= kappa; ++ell) {
      const double a = std::sqrt((4.0 * ell * ell - 1.0) / (double(ell) * ell - double(m) * m));
      const double b = std::sqrt((double(ell - 1) * (ell - 1) - double(m) * m) /
                                 (4.0 * double(ell - 1) * (ell - 1) - 1.0));
      at(ell, m) = a * (x * at(ell - 1, m) - b * at(ell - 2, m));
    }
  }
}

Eigen::MatrixXd evaluate_on_grid(const Eigen::ArrayXd& coeffs, const ModeLattice& lattice,
                                 const GridSpec& grid) {
  if (coeffs.size() != lattice.mode_count())
    throw std::invalid_argument("coefficient length is not (kappa+1)^2");
  if (grid.n_theta < 2 || grid.n_phi < 4) throw std::invalid_argument("grid degenerate");
  const int kappa = lattice.kappa;
  Eigen::MatrixXd field(grid.n_theta, grid.n_phi);
  Eigen::ArrayXd plm;
  const double sqrt2 = std::sqrt(2.0);
  Eigen::ArrayXd ccoef(kappa + 1), scoef(kappa + 1);
  for (int i = 0; i < grid.n_theta; ++i) {
    const double theta = M_PI * i / (grid.n_theta - 1.0);
    legendre_normalized(kappa, std::cos(theta), plm);
    // collapse over ell: field = sum_m [C_m cos(m phi) + S_m sin(m phi)]
    ccoef.setZero();
    scoef.setZero();
    for (int ell = 0; ell <= kappa; ++ell) {
      const int base = ell * ell + ell;  // rank of (ell, 0)
      ccoef[0] += coeffs[base] * plm[ell * (ell + 1) / 2];
      for (int m = 1; m <= ell; ++m) {
        const double p = plm[ell * (ell + 1) / 2 + m];
        ccoef[m] += sqrt2 * coeffs[base + m] * p;
        scoef[m] += sqrt2 * coeffs[base - m] * p;
      }
    }
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = 2.0 * M_PI * j / grid.n_phi;
      double v = ccoef[0];
      for (int m = 1; m <= kappa; ++m)
        v += ccoef[m] * std::cos(m * phi) + scoef[m] * std::sin(m * phi);
      field(i, j) = v;
    }
  }
  return field;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> evaluate_on_grid(const Eigen::ArrayXcd& coeffs,
                                                             const ModeLattice& lattice,
                                                             const GridSpec& grid) {
  return {evaluate_on_grid(Eigen::ArrayXd(coeffs.real()), lattice, grid),
          evaluate_on_grid(Eigen::ArrayXd(coeffs.imag()), lattice, grid)};
}

void write_snapshot(std::ostream& os, const Eigen::MatrixXd& values, int kappa, double time) {
  os << "# " << values.rows() << " " << values.cols() << " " << kappa << " " << time << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) os << " ";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace sphere_trace
