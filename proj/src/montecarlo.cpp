#include "sphere_trace/montecarlo.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sphere_trace {

namespace {

constexpr int kBlockSize = 64;  // samples per accumulator block; fixed so the
                                // reduction tree is independent of threading

MomentParams make_moment_params(const ExperimentConfig& config) {
  MomentParams p;
  p.lattice = {config.kappa};
  p.spectrum = config.levy.spectrum;
  p.kind = config.levy.kind;
  p.complex_noise = config.levy.complex_noise;
  p.tau = config.tau();
  p.monopole = config.monopole;
  InitialMoments init = initial_moments(config.quantity, config.initial, p.lattice);
  p.init_q = std::move(init.q);
  p.init_mean1 = std::move(init.mean1);
  p.init_mean2 = std::move(init.mean2);
  return p;
}

// Per-equation sampling policies for the shared driver below.

struct WavePolicy {
  ModeLattice lattice;
  WaveStepper stepper;
  Eigen::ArrayXd amp, lam;
  const ExperimentConfig& cfg;
  detail::LevyDrawContext ctx;
  Eigen::ArrayXd noise;
  WaveState state;

  WavePolicy(const ExperimentConfig& c, const Eigen::ArrayXd& mean_rates)
      : lattice{c.kappa},
        stepper(lattice, c.scheme, c.tau(), mean_rates),
        amp(mode_amplitudes(c.levy.spectrum, lattice)),
        lam(mode_eigenvalues(lattice)),
        cfg(c),
        ctx(c.levy.kind, c.tau()),
        noise(lattice.mode_count()) {}

  void start(std::uint32_t sample) {
    state = sample_initial_wave(cfg.initial, lattice, cfg.levy.master_seed, sample);
  }
  void advance(std::uint32_t sample, std::uint32_t step) {
    for (int k = 0; k < noise.size(); ++k)
      noise[k] = detail::levy_draw(ctx, amp[k], cfg.levy.master_seed, sample, k, step, 0);
    stepper.step(state, noise);
  }
  double value() const { return 0.5 * (state.u2.square() + lam * state.u1.square()).sum(); }
  Eigen::ArrayXd scalar_field() const { return state.u1; }
};

struct SchrodingerPolicy {
  ModeLattice lattice;
  SchrodingerStepper stepper;
  Eigen::ArrayXd amp, lam;
  const ExperimentConfig& cfg;
  detail::LevyDrawContext ctx;
  Eigen::ArrayXcd noise;
  SchrodingerState state;
  bool energy;

  SchrodingerPolicy(const ExperimentConfig& c)
      : lattice{c.kappa},
        stepper(lattice, c.scheme, c.tau()),
        amp(mode_amplitudes(c.levy.spectrum, lattice)),
        lam(mode_eigenvalues(lattice)),
        cfg(c),
        ctx(c.levy.kind, c.tau()),
        noise(lattice.mode_count()),
        energy(c.quantity == QuantityId::SchrodingerEnergy) {}

  void start(std::uint32_t sample) {
    state = sample_initial_schrodinger(cfg.initial, lattice, cfg.levy.master_seed, sample);
  }
  void advance(std::uint32_t sample, std::uint32_t step) {
    const std::uint64_t seed = cfg.levy.master_seed;
    if (!cfg.levy.complex_noise) {
      for (int k = 0; k < noise.size(); ++k)
        noise[k] = detail::levy_draw(ctx, amp[k], seed, sample, k, step, 0);
    } else {
      for (int k = 0; k < noise.size(); ++k) {
        const double half = amp[k] * 0.70710678118654752440;
        noise[k] = {detail::levy_draw(ctx, half, seed, sample, k, step, 0),
                    detail::levy_draw(ctx, half, seed, sample, k, step, 1)};
      }
    }
    stepper.step(state, noise);
  }
  double value() const {
    return energy ? (lam * state.u.abs2()).sum() : state.u.abs2().sum();
  }
  Eigen::ArrayXd scalar_field() const { return state.u.real(); }
};

struct MaxwellPolicy {
  ModeLattice lattice;
  MaxwellStepper stepper;
  Eigen::ArrayXd amp;
  const ExperimentConfig& cfg;
  detail::LevyDrawContext ctx;
  Eigen::ArrayXd noise_e, noise_h;
  MaxwellState state;

  MaxwellPolicy(const ExperimentConfig& c)
      : lattice{c.kappa},
        stepper(lattice, c.scheme, c.tau()),
        amp(mode_amplitudes(c.levy.spectrum, lattice)),
        cfg(c),
        ctx(c.levy.kind, c.tau()),
        noise_e(lattice.mode_count()),
        noise_h(lattice.mode_count()) {
    if (!c.monopole) amp[0] = 0.0;  // enforce L_{0,0} = 0 on both channels
  }

  void start(std::uint32_t sample) {
    state = sample_initial_maxwell(cfg.initial, lattice, cfg.levy.master_seed, sample);
  }
  void advance(std::uint32_t sample, std::uint32_t step) {
    const std::uint64_t seed = cfg.levy.master_seed;
    for (int k = 0; k < noise_e.size(); ++k) {
      noise_e[k] = detail::levy_draw(ctx, amp[k], seed, sample, k, step, 0);
      noise_h[k] = detail::levy_draw(ctx, amp[k], seed, sample, k, step, 1);
    }
    stepper.step(state, noise_e, noise_h);
  }
  double value() const {
    return 0.5 * (state.e.square() + state.h.square()).sum() +
           0.5 * (state.e0 * state.e0 + state.h0 * state.h0);
  }
  Eigen::ArrayXd scalar_field() const {
    Eigen::ArrayXd h(state.h.size() + 1);
    h[0] = state.h0;
    h.tail(state.h.size()) = state.h;
    return h;
  }
};

template <class Policy, class... Args>
void sample_blocks(const ExperimentConfig& config, std::vector<Accumulator>& blocks,
                   int n_rec, Args&&... args) {
  const int n_blocks = static_cast<int>(blocks.size());
  std::atomic<int> next{0};
  const int workers = std::min(worker_count(), n_blocks);

  auto work = [&] {
    Policy policy(config, std::forward<Args>(args)...);
    Eigen::ArrayXd values(n_rec);
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::uint32_t lo = static_cast<std::uint32_t>(b) * kBlockSize;
      const std::uint32_t hi =
          std::min<std::uint32_t>(lo + kBlockSize, static_cast<std::uint32_t>(config.samples));
      for (std::uint32_t s = lo; s < hi; ++s) {
        policy.start(s);
        int rec = 0;
        values[rec++] = policy.value();
        for (int n = 0; n < config.steps; ++n) {
          policy.advance(s, static_cast<std::uint32_t>(n));
          if ((n + 1) % config.record_every == 0) values[rec++] = policy.value();
        }
        blocks[b].add(values);
      }
    }
  };

  if (workers <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

}  // namespace

Accumulator merge(const Accumulator& a, const Accumulator& b) {
  if (a.count == 0 && a.mean.size() == 0) return b;
  if (b.count == 0 && b.mean.size() == 0) return a;
  if (a.mean.size() != b.mean.size()) throw std::invalid_argument("accumulator grid mismatch");
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Accumulator out(a.mean.size());
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const Eigen::ArrayXd delta = b.mean - a.mean;
  out.mean = a.mean + delta * (nb / (na + nb));
  out.m2 = a.m2 + b.m2 + delta.square() * (na * nb / (na + nb));
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("SPHERE_TRACE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void validate_config(const ExperimentConfig& config) {
  if (config.kappa < 0) throw std::invalid_argument("kappa: must be nonnegative");
  if (config.T <= 0.0) throw std::invalid_argument("T: must be positive");
  if (config.steps < 1) throw std::invalid_argument("N: must be at least 1");
  if (config.samples < 1) throw std::invalid_argument("M: must be at least 1");
  if (config.record_every < 1 || config.steps % config.record_every != 0)
    throw std::invalid_argument("record_every: must divide N");
  if (config.levy.spectrum.a.size() < config.kappa + 1)
    throw std::invalid_argument("levy spectrum: shorter than kappa+1");
  if ((config.levy.spectrum.a < 0.0).any())
    throw std::invalid_argument("levy spectrum: amplitudes must be nonnegative");
  if (config.levy.complex_noise && config.equation != EquationId::Schrodinger)
    throw std::invalid_argument("levy.complex: complex noise is Schrodinger-only");
  switch (config.equation) {
    case EquationId::Wave:
      if (config.quantity != QuantityId::WaveEnergy)
        throw std::invalid_argument("quantity: wave supports energy only");
      break;
    case EquationId::Schrodinger:
      if (config.quantity != QuantityId::SchrodingerMass &&
          config.quantity != QuantityId::SchrodingerEnergy)
        throw std::invalid_argument("quantity: schrodinger supports mass or energy");
      if (config.scheme == SchemeId::AdaptedExpEuler)
        throw std::invalid_argument("scheme: adapted scheme is wave-only");
      break;
    case EquationId::Maxwell:
      if (config.quantity != QuantityId::MaxwellEnergy)
        throw std::invalid_argument("quantity: maxwell supports energy only");
      if (config.scheme == SchemeId::AdaptedExpEuler)
        throw std::invalid_argument("scheme: adapted scheme is wave-only");
      break;
  }
  if (config.initial.kind == InitialSpec::Kind::Custom &&
      (config.initial.c1.size() != ModeLattice{config.kappa}.mode_count() ||
       config.initial.c2.size() != ModeLattice{config.kappa}.mode_count()))
    throw std::invalid_argument("initial: custom coefficients must have (kappa+1)^2 entries");
}

namespace {

Eigen::ArrayXd wave_mean_rates(const ExperimentConfig& config) {
  if (config.scheme != SchemeId::AdaptedExpEuler) return {};
  return mode_amplitudes(config.levy.spectrum, {config.kappa}) *
         unit_mean_rate(config.levy.kind);
}

template <class Policy, class... Args>
Eigen::ArrayXd drive_single_path(const ExperimentConfig& config, Args&&... args) {
  Policy policy(config, std::forward<Args>(args)...);
  policy.start(0);
  for (int n = 0; n < config.steps; ++n) policy.advance(0, static_cast<std::uint32_t>(n));
  return policy.scalar_field();
}

}  // namespace

Eigen::ArrayXd single_path_scalar_coefficients(const ExperimentConfig& config) {
  validate_config(config);
  switch (config.equation) {
    case EquationId::Wave:
      return drive_single_path<WavePolicy>(config, wave_mean_rates(config));
    case EquationId::Schrodinger:
      return drive_single_path<SchrodingerPolicy>(config);
    case EquationId::Maxwell:
      return drive_single_path<MaxwellPolicy>(config);
  }
  throw std::logic_error("unreachable");
}

Eigen::ArrayXd oracle_moment_curve(const ExperimentConfig& config) {
  const MomentParams params = make_moment_params(config);
  const std::vector<double> full =
      moment_recursion(config.quantity, config.scheme, params, config.steps);
  const int n_rec = config.steps / config.record_every + 1;
  Eigen::ArrayXd out(n_rec);
  for (int r = 0; r < n_rec; ++r) out[r] = full[static_cast<std::size_t>(r) * config.record_every];
  return out;
}

QuantitySeries run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const int n_rec = config.steps / config.record_every + 1;
  const double tau = config.tau();

  QuantitySeries series;
  series.times.resize(n_rec);
  for (int r = 0; r < n_rec; ++r) series.times[r] = tau * r * config.record_every;

  series.oracle_moment = oracle_moment_curve(config);
  // The affine trace curve exists for the exponential integrators under
  // mean-zero noise (the adapted scheme then coincides with the plain one).
  const bool mean_zero = config.levy.kind != LevyKind::NonCompensatedMix;
  if (mean_zero &&
      (config.scheme == SchemeId::ExpEuler || config.scheme == SchemeId::AdaptedExpEuler)) {
    TraceParams tp{config.levy.spectrum, {config.kappa}, config.monopole};
    const double q0 = expected_initial_quantity(config.quantity, config.initial, {config.kappa});
    series.oracle_trace.resize(n_rec);
    for (int r = 0; r < n_rec; ++r)
      series.oracle_trace[r] = trace_formula(config.quantity, config.scheme, q0, tp, series.times[r]);
  }

  const int n_blocks = (config.samples + kBlockSize - 1) / kBlockSize;
  std::vector<Accumulator> blocks(n_blocks, Accumulator(n_rec));

  switch (config.equation) {
    case EquationId::Wave:
      sample_blocks<WavePolicy>(config, blocks, n_rec, wave_mean_rates(config));
      break;
    case EquationId::Schrodinger:
      sample_blocks<SchrodingerPolicy>(config, blocks, n_rec);
      break;
    case EquationId::Maxwell:
      sample_blocks<MaxwellPolicy>(config, blocks, n_rec);
      break;
  }

  Accumulator total(n_rec);
  for (const Accumulator& b : blocks) total = merge(total, b);

  const double m = static_cast<double>(total.count);
  series.estimate = total.mean;
  series.stderr_.setZero(n_rec);
  if (total.count > 1) {
    // unbiased sample variance of the mean
    series.stderr_ = (total.m2.max(0.0) / ((m - 1.0) * m)).sqrt();
  }
  return series;
}

}  // namespace sphere_trace
