#pragma once

#include <complex>
#include <cstdint>

#include "sphere_trace/modes.hpp"
#include "sphere_trace/rng.hpp"

namespace sphere_trace {

// Per-mode driving process L_{ell,m} = a_ell * Lhat with unit-variance Lhat:
//   GaussianOnly       Lhat(t) = W(t)
//   CompensatedMix     Lhat(t) = (W(t) + P(t) - t) / sqrt(2)     (mean zero)
//   NonCompensatedMix  Lhat(t) = (W(t) + P(t)) / sqrt(2)         (mean t/sqrt(2))
// with a standard Brownian motion W and an independent unit-rate Poisson P.
enum class LevyKind { GaussianOnly, CompensatedMix, NonCompensatedMix };

struct LevyConfig {
  LevyKind kind = LevyKind::CompensatedMix;
  AngularSpectrum spectrum;
  std::uint64_t master_seed = 0;
  bool complex_noise = false;  // independent Re/Im channels, half variance each
};

// Key of one increment draw.  Identical keys give identical increments, so a
// Monte Carlo run is reproducible for any thread count or sample order.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint32_t sample = 0;
  std::uint32_t mode = 0;  // lattice rank
  std::uint32_t step = 0;
  std::uint32_t channel = 0;
};

// Mean rate per unit time of Lhat for the given kind.
inline double unit_mean_rate(LevyKind kind) {
  return kind == LevyKind::NonCompensatedMix ? 1.0 / std::sqrt(2.0) : 0.0;
}

double increment_mean(const ModeIndex& mode, double tau, const LevyConfig& config);
double increment_variance(const ModeIndex& mode, double tau, const LevyConfig& config);

// Draws the increment over a step of length tau.  Imaginary part is zero
// unless complex_noise is set.
std::complex<double> sample_increment(const ModeIndex& mode, double tau,
                                      const LevyConfig& config, const RngStream& stream);

namespace detail {

// Counter word 3 packs what this draw is for; words 0..2 carry the key fields.
enum class DrawPurpose : std::uint32_t { Noise = 0, Initial = 1 };

inline std::array<std::uint32_t, 4> draw_counter(std::uint32_t sample, std::uint32_t mode,
                                                 std::uint32_t step, DrawPurpose purpose,
                                                 std::uint32_t channel, std::uint32_t draw) {
  return {sample, mode, step,
          (static_cast<std::uint32_t>(purpose) << 24) | (channel << 4) | draw};
}

// Precomputed per-run constants so the hot loop does not re-derive them.
struct LevyDrawContext {
  LevyKind kind = LevyKind::CompensatedMix;
  double tau = 0.0;
  double sqrt_tau = 0.0;
  double exp_neg_tau = 1.0;

  LevyDrawContext() = default;
  LevyDrawContext(LevyKind k, double t)
      : kind(k), tau(t), sqrt_tau(std::sqrt(t)), exp_neg_tau(std::exp(-t)) {}
};

// One Philox block per increment: the first word pair feeds the Brownian
// part through the normal quantile, the second the Poisson inversion.
inline double levy_draw(const LevyDrawContext& ctx, double amp, std::uint64_t seed,
                        std::uint32_t sample, std::uint32_t mode, std::uint32_t step,
                        std::uint32_t channel) {
  if (amp == 0.0) return 0.0;
  const auto r = Philox4x32::block(
      seed, draw_counter(sample, mode, step, DrawPurpose::Noise, channel, 0));
  const double dw = ctx.sqrt_tau * normal_quantile(uniform_open(r[0], r[1]));
  if (ctx.kind == LevyKind::GaussianOnly) return amp * dw;
  const int dp = poisson_inverse(ctx.tau, ctx.exp_neg_tau, uniform_open(r[2], r[3]));
  const double mix =
      ctx.kind == LevyKind::CompensatedMix ? dw + dp - ctx.tau : dw + dp;
  return amp * mix * 0.70710678118654752440;
}

// Standard normal for initial-condition sampling, keyed like an increment.
inline double initial_normal(std::uint64_t seed, std::uint32_t sample, std::uint32_t mode,
                             std::uint32_t channel) {
  const auto r = Philox4x32::block(
      seed, draw_counter(sample, mode, 0, DrawPurpose::Initial, channel, 0));
  return normal_quantile(uniform_open(r[0], r[1]));
}

}  // namespace detail

}  // namespace sphere_trace
