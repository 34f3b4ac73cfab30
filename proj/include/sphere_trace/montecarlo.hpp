#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "sphere_trace/field_synth.hpp"
#include "sphere_trace/integrators.hpp"
#include "sphere_trace/levy.hpp"
#include "sphere_trace/quantities.hpp"

namespace sphere_trace {

enum class EquationId { Wave, Schrodinger, Maxwell };

struct ExperimentConfig {
  EquationId equation = EquationId::Wave;
  SchemeId scheme = SchemeId::ExpEuler;
  QuantityId quantity = QuantityId::WaveEnergy;
  int kappa = 0;
  double T = 1.0;
  int steps = 1;    // N; tau = T / N
  int samples = 1;  // M
  LevyConfig levy;
  InitialSpec initial;
  bool monopole = true;
  int record_every = 1;

  double tau() const { return T / steps; }
};

// Time grid plus the Monte Carlo estimate and both oracle curves evaluated on
// it.  oracle_trace is empty when the configuration admits no affine law.
struct QuantitySeries {
  Eigen::ArrayXd times;
  Eigen::ArrayXd estimate;
  Eigen::ArrayXd stderr_;
  Eigen::ArrayXd oracle_trace;
  Eigen::ArrayXd oracle_moment;

  bool has_trace() const { return oracle_trace.size() != 0; }
};

// Streaming per-time statistics in centered (Welford) form, so a constant
// sample stream yields an exactly zero variance.  Merging any partition of
// the samples matches a single pass up to float reassociation.
struct Accumulator {
  Eigen::ArrayXd mean;
  Eigen::ArrayXd m2;  // centered sum of squares, sum (x - mean)^2
  std::int64_t count = 0;

  explicit Accumulator(Eigen::Index n = 0)
      : mean(Eigen::ArrayXd::Zero(n)), m2(Eigen::ArrayXd::Zero(n)) {}

  void add(const Eigen::ArrayXd& values) {
    ++count;
    const Eigen::ArrayXd delta = values - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (values - mean);
  }
};

Accumulator merge(const Accumulator& a, const Accumulator& b);

// Throws with a description of the offending field before any sampling.
void validate_config(const ExperimentConfig& config);

// Number of workers: SPHERE_TRACE_THREADS if set, hardware concurrency
// otherwise.  Results are bit-identical for every worker count.
int worker_count();

QuantitySeries run_experiment(const ExperimentConfig& config);

// Exact expected-quantity curve of the configured scheme on the recorded
// grid (the moment oracle used in run_experiment).
Eigen::ArrayXd oracle_moment_curve(const ExperimentConfig& config);

// Scalar-field coefficients of sample 0 at final time, for snapshot output:
// u for wave, Re u for Schrodinger, H (monopole at rank 0) for Maxwell.
Eigen::ArrayXd single_path_scalar_coefficients(const ExperimentConfig& config);

}  // namespace sphere_trace
