#include "sphere_trace/levy.hpp"

namespace sphere_trace {

namespace {

double mode_amplitude(const ModeIndex& mode, const LevyConfig& config) {
  if (mode.ell < 0 || std::abs(mode.m) > mode.ell)
    throw std::invalid_argument("invalid mode index");
  if (mode.ell >= config.spectrum.a.size())
    throw std::invalid_argument("mode degree exceeds spectrum length");
  return config.spectrum.a[mode.ell];
}

}  // namespace

double increment_mean(const ModeIndex& mode, double tau, const LevyConfig& config) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  return mode_amplitude(mode, config) * unit_mean_rate(config.kind) * tau;
}

double increment_variance(const ModeIndex& mode, double tau, const LevyConfig& config) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  const double a = mode_amplitude(mode, config);
  return a * a * tau;  // all three kinds have unit variance rate
}

std::complex<double> sample_increment(const ModeIndex& mode, double tau,
                                      const LevyConfig& config, const RngStream& stream) {
  if (tau <= 0.0) throw std::invalid_argument("tau must be positive");
  const double a = mode_amplitude(mode, config);
  const detail::LevyDrawContext ctx(config.kind, tau);
  if (!config.complex_noise) {
    return {detail::levy_draw(ctx, a, stream.master_seed, stream.sample, stream.mode,
                              stream.step, stream.channel),
            0.0};
  }
  // Independent Re/Im copies with amplitude a/sqrt(2) keep the total mode
  // variance at a^2 tau.
  const double half_amp = a * 0.70710678118654752440;
  const double re = detail::levy_draw(ctx, half_amp, stream.master_seed, stream.sample,
                                      stream.mode, stream.step, stream.channel);
  const double im = detail::levy_draw(ctx, half_amp, stream.master_seed, stream.sample,
                                      stream.mode, stream.step, stream.channel + 1);
  return {re, im};
}

}  // namespace sphere_trace
