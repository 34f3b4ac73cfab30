#pragma once

#include <Eigen/Core>
#include <complex>

#include "sphere_trace/modes.hpp"

namespace sphere_trace {

enum class SchemeId { ForwardEM, BackwardEM, ExpEuler, AdaptedExpEuler };

// Wave: X = (u, du/dt), one pair of real coefficients per mode.
struct WaveState {
  Eigen::ArrayXd u1, u2;
};

struct SchrodingerState {
  Eigen::ArrayXcd u;
};

// Maxwell TE mode: e holds the tangential (Psi-channel) electric coefficients
// and h the radial magnetic ones, for ell >= 1; the (0,0) pair lives in the
// scalar monopole channels, which evolve with lambda = 0 dynamics.
struct MaxwellState {
  Eigen::ArrayXd e, h;  // length mode_count() - 1
  double e0 = 0.0;
  double h0 = 0.0;
};

struct Propagator2x2 {
  double r11, r12, r21, r22;
};

// sin(omega tau)/omega with the tau limit at omega = 0; series branch below
// omega tau = 1e-4 to avoid cancellation.
inline double sinc_omega(double omega, double tau) {
  const double x = omega * tau;
  if (x < 1e-4) return tau * (1.0 - x * x / 6.0);
  return std::sin(x) / omega;
}

// (1 - cos(omega tau)) / omega^2, limit tau^2/2 at omega = 0.  The half-angle
// form keeps the large-omega branch stable as well.
inline double one_minus_cos_over_lambda(double omega, double tau) {
  const double x = omega * tau;
  if (x < 1e-4) return 0.5 * tau * tau * (1.0 - x * x / 12.0);
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (omega * omega);
}

Propagator2x2 wave_propagator(double lambda, double tau, SchemeId scheme);
Propagator2x2 maxwell_propagator(double lambda, double tau, SchemeId scheme);

// One-step maps with per-mode coefficients precomputed once.  step() is pure
// in the sense that the result depends only on (state, noise); states are
// value types and may move freely across threads.
class WaveStepper {
 public:
  // mean_rates: per-rank noise mean per unit time, used only by the adapted
  // scheme (may be empty, meaning zero).
  WaveStepper(const ModeLattice& lattice, SchemeId scheme, double tau,
              const Eigen::ArrayXd& mean_rates = {});

  void step(WaveState& state, const Eigen::ArrayXd& noise) const;

 private:
  Eigen::ArrayXd r11_, r12_, r21_, r22_;  // deterministic map
  Eigen::ArrayXd j1_, j2_;                // noise injection
  Eigen::ArrayXd c1_, c2_;                // adapted-scheme drift (size 0 if none)
  Eigen::ArrayXd mean_shift_;             // m*tau subtracted from the increment
};

class SchrodingerStepper {
 public:
  SchrodingerStepper(const ModeLattice& lattice, SchemeId scheme, double tau);

  void step(SchrodingerState& state, const Eigen::ArrayXcd& noise) const;

 private:
  Eigen::ArrayXcd alpha_, beta_;
};

class MaxwellStepper {
 public:
  MaxwellStepper(const ModeLattice& lattice, SchemeId scheme, double tau);

  // noise arrays are indexed by lattice rank; rank 0 feeds the monopole pair.
  void step(MaxwellState& state, const Eigen::ArrayXd& noise_e,
            const Eigen::ArrayXd& noise_h) const;

 private:
  Eigen::ArrayXd r11_, r12_, r21_, r22_;      // over ranks >= 1
  Eigen::ArrayXd je1_, je2_, jh1_, jh2_;      // injections for the two channels
};

// Single-shot conveniences matching the per-operation contracts; they build a
// stepper and apply it once.
WaveState wave_step(const WaveState& state, SchemeId scheme, double tau,
                    const Eigen::ArrayXd& noise, const Eigen::ArrayXd& mean_rates = {});
SchrodingerState schrodinger_step(const SchrodingerState& state, SchemeId scheme, double tau,
                                  const Eigen::ArrayXcd& noise);
MaxwellState maxwell_step(const MaxwellState& state, SchemeId scheme, double tau,
                          const Eigen::ArrayXd& noise_e, const Eigen::ArrayXd& noise_h);

}  // namespace sphere_trace
