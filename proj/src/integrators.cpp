#include "sphere_trace/integrators.hpp"

#include <stdexcept>

namespace sphere_trace {

Propagator2x2 wave_propagator(double lambda, double tau, SchemeId scheme) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  switch (scheme) {
    case SchemeId::ForwardEM:
      return {1.0, tau, -tau * lambda, 1.0};
    case SchemeId::BackwardEM: {
      const double s = 1.0 / (1.0 + tau * tau * lambda);
      return {s, s * tau, -s * tau * lambda, s};
    }
    case SchemeId::ExpEuler:
    case SchemeId::AdaptedExpEuler: {
      const double omega = std::sqrt(lambda);
      const double c = std::cos(omega * tau);
      const double s = sinc_omega(omega, tau);
      return {c, s, -lambda * s, c};  // -omega sin = -lambda * sin/omega
    }
  }
  throw std::invalid_argument("unknown scheme");
}

Propagator2x2 maxwell_propagator(double lambda, double tau, SchemeId scheme) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  const double omega = std::sqrt(lambda);
  switch (scheme) {
    case SchemeId::ForwardEM:
      return {1.0, -tau * omega, tau * omega, 1.0};
    case SchemeId::BackwardEM: {
      const double s = 1.0 / (1.0 + tau * tau * lambda);
      return {s, -s * tau * omega, s * tau * omega, s};
    }
    case SchemeId::ExpEuler: {
      const double c = std::cos(omega * tau);
      const double sn = omega * sinc_omega(omega, tau);
      return {c, -sn, sn, c};
    }
    case SchemeId::AdaptedExpEuler:
      throw std::invalid_argument("adapted scheme is wave-only");
  }
  throw std::invalid_argument("unknown scheme");
}

WaveStepper::WaveStepper(const ModeLattice& lattice, SchemeId scheme, double tau,
                         const Eigen::ArrayXd& mean_rates) {
  const int n = lattice.mode_count();
  if (mean_rates.size() != 0 && mean_rates.size() != n)
    throw std::invalid_argument("mean_rates length mismatch");
  r11_.resize(n); r12_.resize(n); r21_.resize(n); r22_.resize(n);
  j1_.resize(n); j2_.resize(n);
  const bool adapted = scheme == SchemeId::AdaptedExpEuler;
  if (adapted) {
    c1_.setZero(n); c2_.setZero(n); mean_shift_.setZero(n);
  }
  const Eigen::ArrayXd lam = mode_eigenvalues(lattice);
  for (int k = 0; k < n; ++k) {
    const Propagator2x2 p = wave_propagator(lam[k], tau, scheme);
    r11_[k] = p.r11; r12_[k] = p.r12; r21_[k] = p.r21; r22_[k] = p.r22;
    switch (scheme) {
      case SchemeId::ForwardEM:
        j1_[k] = 0.0; j2_[k] = 1.0;
        break;
      case SchemeId::BackwardEM:
        // noise enters the implicit solve: injection = P * (0, 1)
        j1_[k] = p.r12; j2_[k] = p.r22;
        break;
      case SchemeId::ExpEuler:
      case SchemeId::AdaptedExpEuler:
        j1_[k] = p.r12; j2_[k] = p.r11;  // P * (0, 1) = (sin/omega, cos)
        break;
    }
    if (adapted) {
      const double m = mean_rates.size() ? mean_rates[k] : 0.0;
      const double omega = std::sqrt(lam[k]);
      mean_shift_[k] = m * tau;
      c1_[k] = one_minus_cos_over_lambda(omega, tau) * m;
      c2_[k] = sinc_omega(omega, tau) * m;
    }
  }
}

void WaveStepper::step(WaveState& state, const Eigen::ArrayXd& noise) const {
  if (state.u1.size() != r11_.size() || noise.size() != r11_.size())
    throw std::invalid_argument("state/noise length mismatch");
  if (c1_.size() == 0) {
    const Eigen::ArrayXd u1 = r11_ * state.u1 + r12_ * state.u2 + j1_ * noise;
    state.u2 = r21_ * state.u1 + r22_ * state.u2 + j2_ * noise;
    state.u1 = u1;
    return;
  }
  const Eigen::ArrayXd centered = noise - mean_shift_;
  const Eigen::ArrayXd u1 = r11_ * state.u1 + r12_ * state.u2 + j1_ * centered + c1_;
  state.u2 = r21_ * state.u1 + r22_ * state.u2 + j2_ * centered + c2_;
  state.u1 = u1;
}

SchrodingerStepper::SchrodingerStepper(const ModeLattice& lattice, SchemeId scheme,
                                       double tau) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  if (scheme == SchemeId::AdaptedExpEuler)
    throw std::invalid_argument("adapted scheme is wave-only");
  const int n = lattice.mode_count();
  alpha_.resize(n);
  beta_.resize(n);
  const Eigen::ArrayXd lam = mode_eigenvalues(lattice);
  const std::complex<double> mi(0.0, -1.0);
  for (int k = 0; k < n; ++k) {
    switch (scheme) {
      case SchemeId::ForwardEM:
        alpha_[k] = {1.0, tau * lam[k]};
        beta_[k] = mi;
        break;
      case SchemeId::BackwardEM: {
        const std::complex<double> inv = 1.0 / std::complex<double>(1.0, -tau * lam[k]);
        alpha_[k] = inv;
        beta_[k] = mi * inv;
        break;
      }
      default: {  // ExpEuler: exp(-i tau Laplacian) acts as exp(+i tau lambda)
        const std::complex<double> phase(std::cos(tau * lam[k]), std::sin(tau * lam[k]));
        alpha_[k] = phase;
        beta_[k] = mi * phase;
        break;
      }
    }
  }
}

void SchrodingerStepper::step(SchrodingerState& state, const Eigen::ArrayXcd& noise) const {
  if (state.u.size() != alpha_.size() || noise.size() != alpha_.size())
    throw std::invalid_argument("state/noise length mismatch");
  state.u = alpha_ * state.u + beta_ * noise;
}

MaxwellStepper::MaxwellStepper(const ModeLattice& lattice, SchemeId scheme, double tau) {
  if (scheme == SchemeId::AdaptedExpEuler)
    throw std::invalid_argument("adapted scheme is wave-only");
  const int n = lattice.mode_count() - 1;
  r11_.resize(n); r12_.resize(n); r21_.resize(n); r22_.resize(n);
  je1_.resize(n); je2_.resize(n); jh1_.resize(n); jh2_.resize(n);
  const Eigen::ArrayXd lam = mode_eigenvalues(lattice);
  for (int k = 0; k < n; ++k) {
    const Propagator2x2 p = maxwell_propagator(lam[k + 1], tau, scheme);
    r11_[k] = p.r11; r12_[k] = p.r12; r21_[k] = p.r21; r22_[k] = p.r22;
    if (scheme == SchemeId::ForwardEM) {
      je1_[k] = 1.0; je2_[k] = 0.0; jh1_[k] = 0.0; jh2_[k] = 1.0;
    } else {
      // implicit solve and rotation both push the increment through P
      je1_[k] = p.r11; je2_[k] = p.r21;
      jh1_[k] = p.r12; jh2_[k] = p.r22;
    }
  }
}

void MaxwellStepper::step(MaxwellState& state, const Eigen::ArrayXd& noise_e,
                          const Eigen::ArrayXd& noise_h) const {
  const int n = static_cast<int>(r11_.size());
  if (state.e.size() != n || noise_e.size() != n + 1 || noise_h.size() != n + 1)
    throw std::invalid_argument("state/noise length mismatch");
  const auto ne = noise_e.tail(n);
  const auto nh = noise_h.tail(n);
  const Eigen::ArrayXd e = r11_ * state.e + r12_ * state.h + je1_ * ne + jh1_ * nh;
  state.h = r21_ * state.e + r22_ * state.h + je2_ * ne + jh2_ * nh;
  state.e = e;
  state.e0 += noise_e[0];  // lambda = 0: every scheme reduces to the identity
  state.h0 += noise_h[0];
}

WaveState wave_step(const WaveState& state, SchemeId scheme, double tau,
                    const Eigen::ArrayXd& noise, const Eigen::ArrayXd& mean_rates) {
  ModeLattice lattice{static_cast<int>(std::lround(std::sqrt(double(state.u1.size())))) - 1};
  if (lattice.mode_count() != state.u1.size())
    throw std::invalid_argument("state length is not (kappa+1)^2");
  WaveStepper stepper(lattice, scheme, tau, mean_rates);
  WaveState out = state;
  stepper.step(out, noise);
  return out;
}

SchrodingerState schrodinger_step(const SchrodingerState& state, SchemeId scheme, double tau,
                                  const Eigen::ArrayXcd& noise) {
  ModeLattice lattice{static_cast<int>(std::lround(std::sqrt(double(state.u.size())))) - 1};
  if (lattice.mode_count() != state.u.size())
    throw std::invalid_argument("state length is not (kappa+1)^2");
  SchrodingerStepper stepper(lattice, scheme, tau);
  SchrodingerState out = state;
  stepper.step(out, noise);
  return out;
}

MaxwellState maxwell_step(const MaxwellState& state, SchemeId scheme, double tau,
                          const Eigen::ArrayXd& noise_e, const Eigen::ArrayXd& noise_h) {
  ModeLattice lattice{static_cast<int>(std::lround(std::sqrt(double(state.e.size() + 1)))) - 1};
  if (lattice.mode_count() != state.e.size() + 1)
    throw std::invalid_argument("state length is not (kappa+1)^2 - 1");
  MaxwellStepper stepper(lattice, scheme, tau);
  MaxwellState out = state;
  stepper.step(out, noise_e, noise_h);
  return out;
}

}  // namespace sphere_trace
