#include "mbsp/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mbsp/error.hpp"
#include "mbsp/parallel.hpp"

namespace mbsp {
namespace {

// Stream reserved for the fold shuffle so it never collides with chain
// streams (which use small indices).
constexpr std::uint64_t kFoldStream = 0xf01d5eedULL;

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2 || p < 1 || q < 1) throw ParameterError("experiment needs n >= 2, p >= 1, q >= 1");
  if (n_active < 0 || n_active > p) throw ParameterError("n_active must lie in [0, p]");
  if (!(sigma2 > 0.0)) throw ParameterError("sigma2 must be positive");
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("level must lie in (0, 1)");
  if (replications == 0) throw ParameterError("replications must be positive");
  hyper.validate();
}

ExperimentConfig experiment_preset(int id) {
  struct Shape {
    Eigen::Index n, p, q, active;
  };
  static constexpr Shape kShapes[] = {
      {60, 30, 3, 5}, {80, 60, 6, 40}, {50, 200, 5, 20},
      {60, 100, 6, 40}, {100, 500, 3, 10}, {150, 1000, 4, 50},
  };
  if (id < 1 || id > 6) throw InputError("experiment id must be 1..6, got " + std::to_string(id));
  const Shape& s = kShapes[id - 1];
  ExperimentConfig config;
  config.id = id;
  config.n = s.n;
  config.p = s.p;
  config.q = s.q;
  config.n_active = s.active;
  return config;
}

Matrix gen_ar_covariance(Eigen::Index dim, double rho) {
  if (dim < 1) throw ParameterError("covariance dimension must be positive");
  if (!(std::abs(rho) < 1.0)) throw ParameterError("AR coefficient must satisfy |rho| < 1");
  Matrix out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      out(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  return out;
}

Matrix SyntheticTruth::gamma() const { return gen_ar_covariance(b_true.rows(), design_rho); }

std::pair<Dataset, SyntheticTruth> gen_synthetic(const ExperimentConfig& config, RngStream& rng) {
  const Eigen::Index n = config.n, p = config.p, q = config.q;
  if (n < 2 || p < 1 || q < 1 || config.n_active < 0 || config.n_active > p)
    throw ParameterError("invalid synthetic data dimensions");

  SyntheticTruth truth;
  truth.design_rho = 0.5;
  truth.sigma_true = config.sigma2 * gen_ar_covariance(q, 0.5);

  // Partial Fisher-Yates for the active rows.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < config.n_active; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(p - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  truth.active_set.assign(order.begin(), order.begin() + config.n_active);
  std::sort(truth.active_set.begin(), truth.active_set.end());

  truth.b_true = Matrix::Zero(p, q);
  for (const Eigen::Index row : truth.active_set) {
    for (Eigen::Index j = 0; j < q; ++j) {
      const double sign = rng.below(2) == 0 ? -1.0 : 1.0;
      truth.b_true(row, j) = sign * (0.5 + 4.5 * rng.uniform());
    }
  }

  const double rho = truth.design_rho;
  const double innovation = std::sqrt(1.0 - rho * rho);
  Matrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    double prev = rng.normal();
    x(i, 0) = prev;
    for (Eigen::Index j = 1; j < p; ++j) {
      prev = rho * prev + innovation * rng.normal();
      x(i, j) = prev;
    }
  }

  const Matrix l_sigma = cholesky_lower(truth.sigma_true, "noise covariance");
  Matrix z(n, q);
  StreamNoise(rng).fill(z);
  const Matrix e = z * l_sigma.transpose();
  Matrix y = x * truth.b_true + e;

  return {Dataset(std::move(x), std::move(y)), std::move(truth)};
}

MetricsReport compute_metrics(const Matrix& b_hat, const PosteriorSummary& summary,
                              const SyntheticTruth& truth, const Dataset& data) {
  const Eigen::Index p = truth.b_true.rows(), q = truth.b_true.cols(), n = data.n();
  if (b_hat.rows() != p || b_hat.cols() != q || data.p() != p || data.q() != q ||
      summary.active_rows.size() != static_cast<std::size_t>(p))
    throw ParameterError("metric inputs have inconsistent shapes");

  MetricsReport m;
  const double pq = static_cast<double>(p * q);
  m.mse_est = 100.0 * (b_hat - truth.b_true).squaredNorm() / pq;
  m.mse_pred = 100.0 * (data.x() * (b_hat - truth.b_true)).squaredNorm() / static_cast<double>(n * q);

  std::vector<bool> truly_active(static_cast<std::size_t>(p), false);
  for (const Eigen::Index i : truth.active_set) truly_active[static_cast<std::size_t>(i)] = true;
  for (std::size_t i = 0; i < truly_active.size(); ++i) {
    const bool predicted = summary.active_rows[i];
    if (predicted && truly_active[i]) ++m.tp;
    else if (predicted) ++m.fp;
    else if (truly_active[i]) ++m.fn;
    else ++m.tn;
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.fdr = ratio(m.fp, m.tp + m.fp);
  m.fnr = ratio(m.fn, m.tn + m.fn);
  m.mp = static_cast<double>(m.fp + m.fn) / pq;
  m.mp_row = static_cast<double>(m.fp + m.fn) / static_cast<double>(p);
  return m;
}

AveragedMetrics average_metrics(const std::vector<ReplicationResult>& reps) {
  AveragedMetrics avg;
  if (reps.empty()) return avg;
  for (const auto& r : reps) {
    const MetricsReport& m = r.metrics;
    avg.mse_est += m.mse_est;
    avg.mse_pred += m.mse_pred;
    avg.fdr += m.fdr;
    avg.fnr += m.fnr;
    avg.mp += m.mp;
    avg.mp_row += m.mp_row;
    avg.fp += static_cast<double>(m.fp);
    avg.tp += static_cast<double>(m.tp);
    avg.fn += static_cast<double>(m.fn);
    avg.tn += static_cast<double>(m.tn);
  }
  const double count = static_cast<double>(reps.size());
  for (double* field : {&avg.mse_est, &avg.mse_pred, &avg.fdr, &avg.fnr, &avg.mp, &avg.mp_row,
                        &avg.fp, &avg.tp, &avg.fn, &avg.tn})
    *field /= count;
  return avg;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.replications.resize(config.replications);

  parallel_for(config.replications, workers, [&](std::size_t r) {
    RngStream gen_rng(config.seed, 2 * static_cast<std::uint64_t>(r));
    auto [data, truth] = gen_synthetic(config, gen_rng);

    Hyperparameters hyper = config.hyper;
    hyper.seed = config.seed;
    const ChainOutput chain =
        run_chain(data, hyper, ChainOptions{2 * static_cast<std::uint64_t>(r) + 1, false});
    const PosteriorSummary summary = summarize_chain(chain, config.level);

    ReplicationResult& rep = result.replications[r];
    rep.metrics = compute_metrics(summary.median, summary, truth, data);
    rep.wall_time_s = chain.wall_time_s;
    rep.iterations_per_minute = chain.iterations_per_minute;
    rep.tau = chain.hyper.tau_value();
    rep.k = chain.hyper.k_value();
  });

  result.average = average_metrics(result.replications);
  return result;
}

ExperimentResult run_experiment(int preset_id, std::size_t replications, std::uint64_t seed,
                                std::size_t workers) {
  ExperimentConfig config = experiment_preset(preset_id);
  config.replications = replications;
  config.seed = seed;
  return run_experiment(config, workers);
}

std::vector<std::vector<Eigen::Index>> partition_folds(Eigen::Index n, std::size_t folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw InputError("need at least 2 folds");
  if (static_cast<std::size_t>(n) < folds)
    throw InputError("more folds (" + std::to_string(folds) + ") than rows (" +
                     std::to_string(n) + ")");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  RngStream rng(seed, kFoldStream);
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);

  std::vector<std::vector<Eigen::Index>> out(folds);
  const std::size_t base = order.size() / folds, extra = order.size() % folds;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                  order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return out;
}

CrossValidationResult cross_validate(const Dataset& data, std::size_t folds,
                                     const Hyperparameters& hyper, std::size_t workers) {
  hyper.validate();
  CrossValidationResult result;
  result.folds = partition_folds(data.n(), folds, hyper.seed);
  result.fold_mspe.assign(folds, 0.0);

  parallel_for(folds, workers, [&](std::size_t f) {
    std::vector<bool> held_out(static_cast<std::size_t>(data.n()), false);
    for (const Eigen::Index i : result.folds[f]) held_out[static_cast<std::size_t>(i)] = true;
    std::vector<Eigen::Index> train_rows;
    for (Eigen::Index i = 0; i < data.n(); ++i)
      if (!held_out[static_cast<std::size_t>(i)]) train_rows.push_back(i);

    const Dataset train = data.subset(train_rows);
    const ChainOutput chain = run_chain(train, hyper, ChainOptions{f + 1, false});
    const PosteriorSummary summary = summarize_chain(chain, 0.95);
    double sse = 0.0;
    for (const Eigen::Index i : result.folds[f])
      sse += (data.y().row(i) - data.x().row(i) * summary.median).squaredNorm();
    result.fold_mspe[f] =
        100.0 * sse / static_cast<double>(result.folds[f].size() * static_cast<std::size_t>(data.q()));
  });

  double total = 0.0;
  for (const double v : result.fold_mspe) total += v;
  result.mspe = total / static_cast<double>(folds);
  return result;
}

}  // namespace mbsp
