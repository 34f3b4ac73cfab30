#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "sphere_trace/integrators.hpp"
#include "sphere_trace/levy.hpp"
#include "sphere_trace/modes.hpp"

namespace sphere_trace {

enum class QuantityId { WaveEnergy, SchrodingerMass, SchrodingerEnergy, MaxwellEnergy };

// Parseval evaluation in coefficient space.
double evaluate(QuantityId quantity, const WaveState& state, const ModeLattice& lattice);
double evaluate(QuantityId quantity, const SchrodingerState& state, const ModeLattice& lattice);
double evaluate(QuantityId quantity, const MaxwellState& state, const ModeLattice& lattice);

struct TraceParams {
  AngularSpectrum spectrum;
  ModeLattice lattice;
  bool monopole = true;  // Maxwell: include the (0,0) noise channels in the trace
};

// Slope of the affine expected-quantity curve:
//   WaveEnergy        Tr(Q)/2
//   SchrodingerMass   Tr(Q)
//   SchrodingerEnergy Tr(Q^{1/2} (-Laplacian) Q^{1/2})
//   MaxwellEnergy     (Tr(Q_E) + Tr(Q_H))/2, both channels sharing the spectrum
double trace_slope(QuantityId quantity, const TraceParams& params);

// Closed-form expected quantity at time t.  Valid for the exact solution
// (scheme = nullopt) and for the exponential integrators; the Euler-Maruyama
// schemes have no affine law and must go through moment_recursion.
double trace_formula(QuantityId quantity, std::optional<SchemeId> scheme,
                     double initial_expected, const TraceParams& params, double t);

// Everything the exact per-mode second-moment recursions need.  Quantities
// are propagated mode by mode exactly as in the per-scheme update laws and
// summed at output time, so this path is independent of the sampling code.
struct MomentParams {
  ModeLattice lattice;
  AngularSpectrum spectrum;  // noise amplitudes a_ell
  LevyKind kind = LevyKind::CompensatedMix;
  bool complex_noise = false;  // Schrodinger only
  double tau = 0.0;
  bool monopole = true;  // Maxwell: noise on the (0,0) channels
  // Initial data per lattice rank.  init_q is the per-mode expected quantity
  // for wave/Maxwell and the per-mode E|u|^2 for Schrodinger (weighted by
  // lambda at output time for the energy).  Means may be empty (= zero).
  Eigen::ArrayXd init_q;
  Eigen::ArrayXd init_mean1, init_mean2;  // wave (u1,u2), Schrodinger (Re,Im), Maxwell (e,h)
};

// Expected quantity at steps 0..n.
std::vector<double> moment_recursion(QuantityId quantity, SchemeId scheme,
                                     const MomentParams& params, int steps);

}  // namespace sphere_trace
