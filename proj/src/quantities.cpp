#include "sphere_trace/quantities.hpp"

#include <stdexcept>

namespace sphere_trace {

namespace {

[[noreturn]] void family_mismatch() {
  throw std::invalid_argument("quantity does not match the state's equation family");
}

}  // namespace

double evaluate(QuantityId quantity, const WaveState& state, const ModeLattice& lattice) {
  if (quantity != QuantityId::WaveEnergy) family_mismatch();
  if (state.u1.size() != lattice.mode_count() || state.u2.size() != lattice.mode_count())
    throw std::invalid_argument("state length is not (kappa+1)^2");
  const Eigen::ArrayXd lam = mode_eigenvalues(lattice);
  return 0.5 * (state.u2.square() + lam * state.u1.square()).sum();
}

double evaluate(QuantityId quantity, const SchrodingerState& state,
                const ModeLattice& lattice) {
  if (state.u.size() != lattice.mode_count())
    throw std::invalid_argument("state length is not (kappa+1)^2");
  if (quantity == QuantityId::SchrodingerMass) return state.u.abs2().sum();
  if (quantity == QuantityId::SchrodingerEnergy) {
    const Eigen::ArrayXd lam = mode_eigenvalues(lattice);
    return (lam * state.u.abs2()).sum();
  }
  family_mismatch();
}

double evaluate(QuantityId quantity, const MaxwellState& state, const ModeLattice& lattice) {
  if (quantity != QuantityId::MaxwellEnergy) family_mismatch();
  if (state.e.size() != lattice.mode_count() - 1 || state.h.size() != lattice.mode_count() - 1)
    throw std::invalid_argument("state length is not (kappa+1)^2 - 1");
  return 0.5 * (state.e.square() + state.h.square()).sum() +
         0.5 * (state.e0 * state.e0 + state.h0 * state.h0);
}

double trace_slope(QuantityId quantity, const TraceParams& params) {
  switch (quantity) {
    case QuantityId::WaveEnergy:
      return 0.5 * trace_q(params.spectrum, params.lattice);
    case QuantityId::SchrodingerMass:
      return trace_q(params.spectrum, params.lattice);
    case QuantityId::SchrodingerEnergy:
      return weighted_trace_laplacian(params.spectrum, params.lattice);
    case QuantityId::MaxwellEnergy: {
      double tr = trace_q(params.spectrum, params.lattice);
      if (!params.monopole) tr -= params.spectrum.a[0] * params.spectrum.a[0];
      return tr;  // (Tr Q_E + Tr Q_H)/2 with Q_E = Q_H
    }
  }
  throw std::invalid_argument("unknown quantity");
}

double trace_formula(QuantityId quantity, std::optional<SchemeId> scheme,
                     double initial_expected, const TraceParams& params, double t) {
  if (scheme && *scheme != SchemeId::ExpEuler && *scheme != SchemeId::AdaptedExpEuler)
    throw std::invalid_argument(
        "no closed-form trace curve for Euler-Maruyama schemes; use moment_recursion");
  return initial_expected + trace_slope(quantity, params) * t;
}

namespace {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

// Per-mode recursion for the 2x2 real systems (wave and Maxwell).  One step of
// any of the schemes has the form  x' = M x + sum_ch J_ch dL_ch + c  with
// M^T D M = c_M D for the energy form D, so the expected per-mode energy obeys
//   q' = c_M q + (M mu)^T D b + b^T D b / 2 + sum_ch v_ch tau (J_ch^T D J_ch)/2
// with b = sum_ch J_ch m_ch tau + c and mu the mean vector.
struct PairModeRecursion {
  double m11, m12, m21, m22;  // M
  double cm;                  // energy multiplier c_M
  double d1, d2;              // diagonal of D
  Vec2 j[2];                  // injections (second channel unused for wave)
  double jdj[2];              // J^T D J, algebraic values
  Vec2 b;                     // total deterministic shift per step
  double var_rate[2];         // v_ch (per unit time)

  void advance(double tau, double& q, Vec2& mu) const {
    const Vec2 pm{m11 * mu.x + m12 * mu.y, m21 * mu.x + m22 * mu.y};
    q = cm * q + (d1 * pm.x * b.x + d2 * pm.y * b.y) +
        0.5 * (d1 * b.x * b.x + d2 * b.y * b.y) +
        0.5 * tau * (var_rate[0] * jdj[0] + var_rate[1] * jdj[1]);
    mu = {pm.x + b.x, pm.y + b.y};
  }
};

PairModeRecursion wave_mode_recursion(double lambda, double tau, SchemeId scheme,
                                      double v, double m_rate) {
  PairModeRecursion r{};
  const Propagator2x2 p = wave_propagator(lambda, tau, scheme);
  r.m11 = p.r11; r.m12 = p.r12; r.m21 = p.r21; r.m22 = p.r22;
  r.d1 = lambda; r.d2 = 1.0;
  r.var_rate[0] = v; r.var_rate[1] = 0.0;
  r.jdj[1] = 0.0;
  const double den = 1.0 + tau * tau * lambda;
  switch (scheme) {
    case SchemeId::ForwardEM:
      r.cm = den;
      r.j[0] = {0.0, 1.0};
      r.jdj[0] = 1.0;
      r.b = {0.0, m_rate * tau};
      break;
    case SchemeId::BackwardEM:
      r.cm = 1.0 / den;
      r.j[0] = {p.r12, p.r22};
      r.jdj[0] = 1.0 / den;
      r.b = {p.r12 * m_rate * tau, p.r22 * m_rate * tau};
      break;
    case SchemeId::ExpEuler:
      r.cm = 1.0;
      r.j[0] = {p.r12, p.r11};
      r.jdj[0] = 1.0;  // lambda sinc^2 + cos^2 = 1
      r.b = {p.r12 * m_rate * tau, p.r11 * m_rate * tau};
      break;
    case SchemeId::AdaptedExpEuler: {
      // increment is centered by m tau; drift integrates the mean exactly
      r.cm = 1.0;
      r.j[0] = {p.r12, p.r11};
      r.jdj[0] = 1.0;
      const double omega = std::sqrt(lambda);
      r.b = {one_minus_cos_over_lambda(omega, tau) * m_rate,
             sinc_omega(omega, tau) * m_rate};
      break;
    }
  }
  return r;
}

PairModeRecursion maxwell_mode_recursion(double lambda, double tau, SchemeId scheme,
                                         double v_e, double v_h, double me, double mh) {
  PairModeRecursion r{};
  const Propagator2x2 p = maxwell_propagator(lambda, tau, scheme);
  r.m11 = p.r11; r.m12 = p.r12; r.m21 = p.r21; r.m22 = p.r22;
  r.d1 = 1.0; r.d2 = 1.0;
  r.var_rate[0] = v_e; r.var_rate[1] = v_h;
  const double den = 1.0 + tau * tau * lambda;
  switch (scheme) {
    case SchemeId::ForwardEM:
      r.cm = den;
      r.j[0] = {1.0, 0.0}; r.j[1] = {0.0, 1.0};
      r.jdj[0] = r.jdj[1] = 1.0;
      break;
    case SchemeId::BackwardEM:
      r.cm = 1.0 / den;
      r.j[0] = {p.r11, p.r21}; r.j[1] = {p.r12, p.r22};
      r.jdj[0] = r.jdj[1] = 1.0 / den;
      break;
    default:
      r.cm = 1.0;
      r.j[0] = {p.r11, p.r21}; r.j[1] = {p.r12, p.r22};
      r.jdj[0] = r.jdj[1] = 1.0;
      break;
  }
  r.b = {r.j[0].x * me * tau + r.j[1].x * mh * tau,
         r.j[0].y * me * tau + r.j[1].y * mh * tau};
  return r;
}

std::vector<double> pair_recursion(QuantityId quantity, SchemeId scheme,
                                   const MomentParams& params, int steps) {
  const bool maxwell = quantity == QuantityId::MaxwellEnergy;
  const int n = params.lattice.mode_count();
  const Eigen::ArrayXd lam = mode_eigenvalues(params.lattice);
  const Eigen::ArrayXd amp = mode_amplitudes(params.spectrum, params.lattice);
  const double mean_unit = unit_mean_rate(params.kind);

  std::vector<PairModeRecursion> rec(n);
  std::vector<double> q(n);
  std::vector<Vec2> mu(n);
  for (int k = 0; k < n; ++k) {
    double a = amp[k];
    if (maxwell && k == 0 && !params.monopole) a = 0.0;
    const double v = a * a;
    const double m = a * mean_unit;
    rec[k] = maxwell ? maxwell_mode_recursion(lam[k], params.tau, scheme, v, v, m, m)
                     : wave_mode_recursion(lam[k], params.tau, scheme, v, m);
    q[k] = params.init_q.size() ? params.init_q[k] : 0.0;
    mu[k] = {params.init_mean1.size() ? params.init_mean1[k] : 0.0,
             params.init_mean2.size() ? params.init_mean2[k] : 0.0};
  }

  std::vector<double> out(steps + 1);
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += q[k];
  out[0] = total;
  for (int s = 1; s <= steps; ++s) {
    total = 0.0;
    for (int k = 0; k < n; ++k) {
      rec[k].advance(params.tau, q[k], mu[k]);
      total += q[k];
    }
    out[s] = total;
  }
  return out;
}

std::vector<double> schrodinger_recursion(QuantityId quantity, SchemeId scheme,
                                          const MomentParams& params, int steps) {
  if (scheme == SchemeId::AdaptedExpEuler)
    throw std::invalid_argument("adapted scheme is wave-only");
  const int n = params.lattice.mode_count();
  const Eigen::ArrayXd lam = mode_eigenvalues(params.lattice);
  const Eigen::ArrayXd amp = mode_amplitudes(params.spectrum, params.lattice);
  const double tau = params.tau;
  const double mean_unit = unit_mean_rate(params.kind);
  const bool energy = quantity == QuantityId::SchrodingerEnergy;

  std::vector<std::complex<double>> alpha(n), beta(n), mu(n), mtau(n);
  std::vector<double> s2(n), vtau(n), gain(n);
  const std::complex<double> mi(0.0, -1.0);
  for (int k = 0; k < n; ++k) {
    switch (scheme) {
      case SchemeId::ForwardEM:
        alpha[k] = {1.0, tau * lam[k]};
        beta[k] = mi;
        gain[k] = 1.0 + tau * tau * lam[k] * lam[k];
        break;
      case SchemeId::BackwardEM: {
        const double den = 1.0 + tau * tau * lam[k] * lam[k];
        alpha[k] = std::complex<double>(1.0, tau * lam[k]) / den;
        beta[k] = mi * alpha[k];
        gain[k] = 1.0 / den;
        break;
      }
      default:
        alpha[k] = {std::cos(tau * lam[k]), std::sin(tau * lam[k])};
        beta[k] = mi * alpha[k];
        gain[k] = 1.0;
        break;
    }
    vtau[k] = amp[k] * amp[k] * tau;
    // real noise has mean rate a m_unit; the complex split halves each channel
    mtau[k] = params.complex_noise
                  ? std::complex<double>(0.5, 0.5) * (amp[k] * mean_unit * tau)
                  : std::complex<double>(amp[k] * mean_unit * tau, 0.0);
    s2[k] = params.init_q.size() ? params.init_q[k] : 0.0;
    mu[k] = {params.init_mean1.size() ? params.init_mean1[k] : 0.0,
             params.init_mean2.size() ? params.init_mean2[k] : 0.0};
  }

  auto total = [&] {
    double t = 0.0;
    for (int k = 0; k < n; ++k) t += energy ? lam[k] * s2[k] : s2[k];
    return t;
  };
  std::vector<double> out(steps + 1);
  out[0] = total();
  for (int s = 1; s <= steps; ++s) {
    for (int k = 0; k < n; ++k) {
      // E|u'|^2 = |alpha|^2 E|u|^2 + 2 Re(alpha mu conj(beta m tau)) + |beta|^2 E|dL|^2
      const double bsq = std::norm(beta[k]);
      s2[k] = gain[k] * s2[k] +
              2.0 * std::real(alpha[k] * mu[k] * std::conj(beta[k] * mtau[k])) +
              bsq * (vtau[k] + std::norm(mtau[k]));
      mu[k] = alpha[k] * mu[k] + beta[k] * mtau[k];
    }
    out[s] = total();
  }
  return out;
}

}  // namespace

std::vector<double> moment_recursion(QuantityId quantity, SchemeId scheme,
                                     const MomentParams& params, int steps) {
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  if (params.tau <= 0.0) throw std::invalid_argument("tau must be positive");
  const int n = params.lattice.mode_count();
  for (const auto* arr : {&params.init_q, &params.init_mean1, &params.init_mean2})
    if (arr->size() != 0 && arr->size() != n)
      throw std::invalid_argument("initial moment array length mismatch");
  switch (quantity) {
    case QuantityId::WaveEnergy:
    case QuantityId::MaxwellEnergy:
      return pair_recursion(quantity, scheme, params, steps);
    case QuantityId::SchrodingerMass:
    case QuantityId::SchrodingerEnergy:
      return schrodinger_recursion(quantity, scheme, params, steps);
  }
  throw std::invalid_argument("unknown quantity");
}

}  // namespace sphere_trace
