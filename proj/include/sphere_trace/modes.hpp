#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sphere_trace {

// Index (ell, m) of a real spherical harmonic Y_{ell,m}, |m| <= ell.
struct ModeIndex {
  int ell = 0;
  int m = 0;

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

// Spectral truncation: all modes with 0 <= ell <= kappa, (kappa+1)^2 in total.
struct ModeLattice {
  int kappa = 0;

  int mode_count() const { return (kappa + 1) * (kappa + 1); }
};

// Per-degree amplitudes a_ell, ell = 0..kappa.  Mode (ell,m) carries variance
// a_ell^2 per unit time, independent of m.
struct AngularSpectrum {
  Eigen::ArrayXd a;
};

// Laplace-Beltrami eigenvalue lambda_ell = ell(ell+1), evaluated in integer
// arithmetic so trace sums do not pick up rounding noise.
inline double eigenvalue(int ell) {
  if (ell < 0) throw std::invalid_argument("eigenvalue: negative degree");
  return static_cast<double>(static_cast<std::int64_t>(ell) * (ell + 1));
}

// ell^(-x) with the convention 0^(-x) := 1 for x > 0.
inline double decay_amplitude(int ell, double exponent) {
  if (ell == 0) return 1.0;
  return std::pow(static_cast<double>(ell), -exponent);
}

// Position of (ell, m) in the (ell ascending, m ascending) enumeration.
inline int mode_rank(const ModeIndex& idx) {
  return idx.ell * idx.ell + (idx.m + idx.ell);
}

inline std::vector<ModeIndex> enumerate_modes(const ModeLattice& lattice) {
  std::vector<ModeIndex> out;
  out.reserve(lattice.mode_count());
  for (int ell = 0; ell <= lattice.kappa; ++ell)
    for (int m = -ell; m <= ell; ++m) out.push_back({ell, m});
  return out;
}

inline void check_spectrum(const AngularSpectrum& spectrum, const ModeLattice& lattice) {
  if (spectrum.a.size() < lattice.kappa + 1)
    throw std::invalid_argument("spectrum shorter than kappa+1");
}

// Tr(Q^kappa) = sum_{ell<=kappa} (2 ell + 1) a_ell^2.
inline double trace_q(const AngularSpectrum& spectrum, const ModeLattice& lattice) {
  check_spectrum(spectrum, lattice);
  double sum = 0.0;
  for (int ell = 0; ell <= lattice.kappa; ++ell)
    sum += (2.0 * ell + 1.0) * spectrum.a[ell] * spectrum.a[ell];
  return sum;
}

// Tr(Q^{1/2} (-Laplacian) Q^{1/2}) = sum (2 ell + 1) a_ell^2 ell(ell+1).
inline double weighted_trace_laplacian(const AngularSpectrum& spectrum,
                                       const ModeLattice& lattice) {
  check_spectrum(spectrum, lattice);
  double sum = 0.0;
  for (int ell = 0; ell <= lattice.kappa; ++ell)
    sum += (2.0 * ell + 1.0) * spectrum.a[ell] * spectrum.a[ell] * eigenvalue(ell);
  return sum;
}

// a_ell = scale * ell^(-decay) with the 0^-x := 1 convention, so a_0 = scale;
// the shape used in all experiments (scale 1, decay 4).
inline AngularSpectrum power_law_spectrum(int kappa, double scale, double decay) {
  AngularSpectrum s;
  s.a.resize(kappa + 1);
  for (int ell = 0; ell <= kappa; ++ell) s.a[ell] = scale * decay_amplitude(ell, decay);
  return s;
}

// lambda_ell expanded to one entry per lattice rank.
inline Eigen::ArrayXd mode_eigenvalues(const ModeLattice& lattice) {
  Eigen::ArrayXd lam(lattice.mode_count());
  int k = 0;
  for (int ell = 0; ell <= lattice.kappa; ++ell) {
    const double l = eigenvalue(ell);
    for (int m = -ell; m <= ell; ++m) lam[k++] = l;
  }
  return lam;
}

// a_ell expanded to one entry per lattice rank.
inline Eigen::ArrayXd mode_amplitudes(const AngularSpectrum& spectrum,
                                      const ModeLattice& lattice) {
  check_spectrum(spectrum, lattice);
  Eigen::ArrayXd amp(lattice.mode_count());
  int k = 0;
  for (int ell = 0; ell <= lattice.kappa; ++ell)
    for (int m = -ell; m <= ell; ++m) amp[k++] = spectrum.a[ell];
  return amp;
}

}  // namespace sphere_trace
