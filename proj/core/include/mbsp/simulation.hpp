#pragma once

#include <cstdint>
#include <vector>

#include "mbsp/dataset.hpp"
#include "mbsp/rng.hpp"
#include "mbsp/sampler.hpp"
#include "mbsp/summary.hpp"

namespace mbsp {

struct ExperimentConfig {
  int id = 0;  // 1..6 for the presets, 0 for custom
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Eigen::Index n_active = 0;
  double sigma2 = 2.0;
  double level = 0.95;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  Hyperparameters hyper;  // chain controls; tau and k default per replication

  void validate() const;
};

// The six simulation settings: (n, p, q, active rows)
//   1: 60, 30, 3, 5     2: 80, 60, 6, 40     3: 50, 200, 5, 20
//   4: 60, 100, 6, 40   5: 100, 500, 3, 10   6: 150, 1000, 4, 50
ExperimentConfig experiment_preset(int id);

struct SyntheticTruth {
  Matrix b_true;
  std::vector<Eigen::Index> active_set;  // ascending
  Matrix sigma_true;
  double design_rho = 0.5;

  // Design covariance Gamma_ij = rho^|i-j|, built on demand.
  Matrix gamma() const;
};

Matrix gen_ar_covariance(Eigen::Index dim, double rho);

struct MetricsReport {
  double mse_est = 0.0;
  double mse_pred = 0.0;
  double fdr = 0.0;
  double fnr = 0.0;
  double mp = 0.0;      // (FP + FN) / (pq)
  double mp_row = 0.0;  // (FP + FN) / p
  std::size_t fp = 0;
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// Arithmetic mean of each metric over replications; counts become reals.
struct AveragedMetrics {
  double mse_est = 0.0;
  double mse_pred = 0.0;
  double fdr = 0.0;
  double fnr = 0.0;
  double mp = 0.0;
  double mp_row = 0.0;
  double fp = 0.0;
  double tp = 0.0;
  double fn = 0.0;
  double tn = 0.0;
};

struct ReplicationResult {
  MetricsReport metrics;
  double wall_time_s = 0.0;
  double iterations_per_minute = 0.0;
  double tau = 0.0;
  double k = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicationResult> replications;
  AveragedMetrics average;
};

// X rows ~ N(0, Gamma) via the AR(1) recursion, random active rows with
// entries uniform on [-5, -0.5] U [0.5, 5], E rows ~ N(0, sigma2 AR_q(0.5)).
std::pair<Dataset, SyntheticTruth> gen_synthetic(const ExperimentConfig& config, RngStream& rng);

MetricsReport compute_metrics(const Matrix& b_hat, const PosteriorSummary& summary,
                              const SyntheticTruth& truth, const Dataset& data);

AveragedMetrics average_metrics(const std::vector<ReplicationResult>& reps);

// Replication r generates data from stream (seed, 2r) and runs its chain on
// stream (seed, 2r + 1); replications run on up to `workers` threads.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 1);
ExperimentResult run_experiment(int preset_id, std::size_t replications, std::uint64_t seed,
                                std::size_t workers = 1);

struct CrossValidationResult {
  double mspe = 0.0;  // 100 x mean over folds
  std::vector<double> fold_mspe;  // 100 x held-out mean squared residual
  std::vector<std::vector<Eigen::Index>> folds;
};

// Seeded shuffle of 0..n-1 split into `folds` contiguous blocks whose sizes
// differ by at most one.
std::vector<std::vector<Eigen::Index>> partition_folds(Eigen::Index n, std::size_t folds,
                                                       std::uint64_t seed);

// K-fold mean squared prediction error of the posterior median, x100.
CrossValidationResult cross_validate(const Dataset& data, std::size_t folds,
                                     const Hyperparameters& hyper, std::size_t workers = 1);

}  // namespace mbsp
