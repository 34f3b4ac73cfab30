#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>

#include "sphere_trace/integrators.hpp"
#include "sphere_trace/modes.hpp"
#include "sphere_trace/quantities.hpp"

namespace sphere_trace {

// Initial data recipes.  The Paper* kinds draw independent Gaussians with
// per-mode standard deviations ell^-gamma and ell^(1-gamma) (0^-x := 1) on
// the two channels; Custom carries fixed coefficient vectors.
struct InitialSpec {
  enum class Kind { Zero, PaperWave, PaperSchrodinger, PaperMaxwell, Custom };
  Kind kind = Kind::Zero;
  double gamma = 3.0 + 1e-5;
  // Custom coefficients per lattice rank: (u1,u2) wave, (Re,Im) Schrodinger,
  // (e,h) Maxwell with rank 0 holding the monopole pair.
  Eigen::ArrayXd c1, c2;
};

// Uniform latitude-longitude grid, theta_i in [0,pi], phi_j in [0,2pi).
struct GridSpec {
  int n_theta = 0;
  int n_phi = 0;
};

WaveState sample_initial_wave(const InitialSpec& spec, const ModeLattice& lattice,
                              std::uint64_t seed, std::uint32_t sample);
SchrodingerState sample_initial_schrodinger(const InitialSpec& spec, const ModeLattice& lattice,
                                            std::uint64_t seed, std::uint32_t sample);
MaxwellState sample_initial_maxwell(const InitialSpec& spec, const ModeLattice& lattice,
                                    std::uint64_t seed, std::uint32_t sample);

// Exact expectation of the quantity under the initial law (the oracle's
// starting value; never the empirical average).
double expected_initial_quantity(QuantityId quantity, const InitialSpec& spec,
                                 const ModeLattice& lattice);

// Per-rank ingredients for MomentParams: expected per-mode quantity (E|u|^2
// for Schrodinger) and the two mean channels (nonzero for Custom only).
struct InitialMoments {
  Eigen::ArrayXd q;
  Eigen::ArrayXd mean1, mean2;
};
InitialMoments initial_moments(QuantityId quantity, const InitialSpec& spec,
                               const ModeLattice& lattice);

// Normalized real spherical harmonics at all grid nodes:
// field(i,j) = sum c_{ell,m} Y_{ell,m}(theta_i, phi_j).
Eigen::MatrixXd evaluate_on_grid(const Eigen::ArrayXd& coeffs, const ModeLattice& lattice,
                                 const GridSpec& grid);

// Complex coefficients synthesize to (Re field, Im field).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> evaluate_on_grid(const Eigen::ArrayXcd& coeffs,
                                                             const ModeLattice& lattice,
                                                             const GridSpec& grid);

// Fully normalized associated Legendre values (Condon-Shortley phase
// included) at x = cos(theta), packed as (ell,m) -> ell(ell+1)/2 + m for
// 0 <= m <= ell <= kappa.
void legendre_normalized(int kappa, double x, Eigen::ArrayXd& out);

// Snapshot format: "# n_theta n_phi kappa time" then one grid row per line.
void write_snapshot(std::ostream& os, const Eigen::MatrixXd& values, int kappa, double time);

}  // namespace sphere_trace
