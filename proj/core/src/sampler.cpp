#include "mbsp/sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mbsp/error.hpp"

namespace mbsp {

// --- Hyperparameters --------------------------------------------------------

void Hyperparameters::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(u)) throw ParameterError("u must be positive");
  if (!positive(a)) throw ParameterError("a must be positive");
  if (tau && !positive(*tau)) throw ParameterError("tau must be positive");
  if (!(std::isfinite(d) && d > 2.0)) throw ParameterError("d must exceed 2");
  if (k && !positive(*k)) throw ParameterError("k must be positive");
  if (iterations == 0) throw ParameterError("iterations must be positive");
  if (burn_in >= iterations) throw ParameterError("burn-in must be smaller than iterations");
  if (thin == 0) throw ParameterError("thin must be at least 1");
}

Hyperparameters Hyperparameters::resolve(const Dataset& data) const {
  Hyperparameters out = *this;
  if (!out.tau) out.tau = default_tau(data.n(), data.p());
  if (!out.k) out.k = default_k(data, ridge_estimate(data));
  // A perfectly interpolating ridge fit leaves k = 0, which is not a valid
  // inverse-Wishart scale.
  if (!(*out.k > 0.0)) throw InputError("residual variance is zero; pass k explicitly");
  out.validate();
  return out;
}

double Hyperparameters::tau_value() const {
  if (!tau) throw ParameterError("tau has not been resolved");
  return *tau;
}

double Hyperparameters::k_value() const {
  if (!k) throw ParameterError("k has not been resolved");
  return *k;
}

// --- ChainOutput ------------------------------------------------------------

Eigen::Map<const RowMatrix> ChainOutput::b_draw(std::size_t index) const {
  const auto stride = static_cast<std::size_t>(p * q);
  return {b_draws.data() + index * stride, p, q};
}

Eigen::Map<const RowMatrix> ChainOutput::sigma_draw(std::size_t index) const {
  const auto stride = static_cast<std::size_t>(q * q);
  return {sigma_draws.data() + index * stride, q, q};
}

// --- Defaults and initialization -------------------------------------------

double default_tau(Eigen::Index n, Eigen::Index p) {
  if (n < 2) throw ParameterError("default tau needs n >= 2");
  if (p < 1) throw ParameterError("default tau needs p >= 1");
  const double nn = static_cast<double>(n);
  return 1.0 / (static_cast<double>(p) * std::sqrt(nn * std::log(nn)));
}

Matrix ridge_estimate(const Dataset& data) {
  const Matrix& x = data.x();
  const Matrix& y = data.y();
  if (data.p() <= data.n()) {
    Matrix a = x.transpose() * x;
    a.diagonal().array() += 1.0;
    return cholesky_spd(a, "ridge normal equations").solve(x.transpose() * y);
  }
  // (X^T X + I)^-1 X^T = X^T (X X^T + I)^-1
  Matrix g = x * x.transpose();
  g.diagonal().array() += 1.0;
  return x.transpose() * cholesky_spd(g, "ridge dual system").solve(y);
}

double default_k(const Dataset& data, const Matrix& b_init) {
  if (b_init.rows() != data.p() || b_init.cols() != data.q())
    throw ParameterError("b_init is not p x q");
  const Matrix resid = data.y() - data.x() * b_init;
  const double count = static_cast<double>(resid.size());
  const double mean = resid.mean();
  return (resid.array() - mean).square().sum() / (count - 1.0);
}

GibbsState initialize_state(const Dataset& data, const Hyperparameters& hyper,
                            [[maybe_unused]] RngStream& rng) {
  for (Eigen::Index j = 0; j < data.q(); ++j) {
    const auto col = data.y().col(j).array();
    if ((col - col.mean()).square().sum() == 0.0)
      throw InputError("response column " + std::to_string(j + 1) + " has zero variance");
  }

  GibbsState state;
  state.b = ridge_estimate(data);
  const Matrix resid = data.y() - data.x() * state.b;
  const Matrix centred = resid.rowwise() - resid.colwise().mean();
  state.sigma = centred.transpose() * centred / static_cast<double>(data.n() - 1);
  state.sigma.diagonal().array() += 1e-6;
  symmetrize(state.sigma);
  TpbnPrior().initialize(state, hyper);
  return state;
}

// --- B | rest ---------------------------------------------------------------

CoefficientSampler::CoefficientSampler(const Dataset& data, CoefficientPath path)
    : data_(&data), path_(path) {
  if (path_ == CoefficientPath::automatic)
    path_ = data.p() > data.n() ? CoefficientPath::fast : CoefficientPath::naive;
  if (path_ == CoefficientPath::naive) {
    xtx_ = data.x().transpose() * data.x();
    xty_ = data.x().transpose() * data.y();
  }
}

Matrix CoefficientSampler::draw(const Matrix& sigma, const Vector& psi, GaussianNoise& noise) const {
  if (psi.size() != data_->p() || sigma.rows() != data_->q() || sigma.cols() != data_->q())
    throw ParameterError("state dimensions do not match the dataset");
  return path_ == CoefficientPath::fast ? draw_fast(sigma, psi, noise)
                                        : draw_naive(sigma, psi, noise);
}

Matrix CoefficientSampler::draw_naive(const Matrix& sigma, const Vector& psi,
                                      GaussianNoise& noise) const {
  Matrix a = xtx_;
  a.diagonal().array() += psi.array().inverse();
  const auto llt = cholesky_spd(a, "B precision matrix");
  const Matrix mean = llt.solve(xty_);

  const Matrix l_sigma = cholesky_lower(sigma, "Sigma");
  Matrix z(data_->p(), data_->q());
  noise.fill(z);
  // L_A^-T Z has covariance A^-1 per column.
  const Matrix scaled = llt.matrixU().solve(z);
  return mean + scaled * l_sigma.transpose();
}

Matrix CoefficientSampler::draw_fast(const Matrix& sigma, const Vector& psi,
                                     GaussianNoise& noise) const {
  const Matrix& x = data_->x();
  const Eigen::Index n = data_->n();
  const Eigen::Index p = data_->p();
  const Eigen::Index q = data_->q();

  // Whitened responses Y L_Sigma^-T turn the column covariance into I_q.
  const Matrix l_sigma = cholesky_lower(sigma, "Sigma");
  const Matrix y_white = l_sigma.triangularView<Eigen::Lower>().solve(data_->y().transpose()).transpose();

  const Vector sqrt_psi = psi.array().sqrt();
  const Matrix x_scaled = x * sqrt_psi.asDiagonal();
  Matrix g = Matrix::Identity(n, n);
  g.selfadjointView<Eigen::Lower>().rankUpdate(x_scaled);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  const auto llt = cholesky_spd(g, "X D X^T + I");

  Matrix w(p, q);
  noise.fill(w);
  w = sqrt_psi.asDiagonal() * w;
  Matrix delta(n, q);
  noise.fill(delta);

  const Matrix v = x * w + delta;
  const Matrix z = llt.solve(y_white - v);
  const Matrix b_white = w + psi.asDiagonal() * (x.transpose() * z);
  return b_white * l_sigma.transpose();
}

namespace detail {

Matrix update_b(const GibbsState& state, const Dataset& data, CoefficientPath path,
                GaussianNoise& noise) {
  return CoefficientSampler(data, path).draw(state.sigma, state.psi, noise);
}

Matrix draw_sigma_conditional(const Matrix& scatter, double count, double d, double k,
                              RngStream& rng) {
  Matrix scale = scatter;
  scale.diagonal().array() += k;
  symmetrize(scale);
  if (!is_symmetric(scale)) throw NumericError("Sigma scale matrix is not symmetric");
  return sample_inverse_wishart(rng, d + count, scale);
}

}  // namespace detail

Matrix update_b_naive(const GibbsState& state, const Dataset& data, RngStream& rng) {
  StreamNoise noise(rng);
  return detail::update_b(state, data, CoefficientPath::naive, noise);
}

Matrix update_b_fast(const GibbsState& state, const Dataset& data, RngStream& rng) {
  StreamNoise noise(rng);
  return detail::update_b(state, data, CoefficientPath::fast, noise);
}

// --- Local scales -----------------------------------------------------------

Vector update_psi(const GibbsState& state, const Hyperparameters& hyper, RngStream& rng,
                  GigGuard* guard) {
  const Eigen::Index p = state.b.rows();
  const Eigen::Index q = state.b.cols();
  const Matrix l_sigma = cholesky_lower(state.sigma, "Sigma");
  // Column i of L^-1 B^T has squared norm b_i Sigma^-1 b_i^T.
  const Matrix whitened = l_sigma.triangularView<Eigen::Lower>().solve(state.b.transpose());
  const double lambda = hyper.u - 0.5 * static_cast<double>(q);

  Vector psi(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const GigParams params{lambda, whitened.col(i).squaredNorm(), 2.0 * state.zeta(i)};
    const double draw = sample_gig(rng, params, guard);
    psi(i) = draw > 0.0 ? draw : std::numeric_limits<double>::min();
  }
  return psi;
}

Vector update_zeta(const GibbsState& state, const Hyperparameters& hyper, RngStream& rng) {
  const double shape = hyper.a + hyper.u;
  const double tau = hyper.tau_value();
  Vector zeta(state.psi.size());
  for (Eigen::Index i = 0; i < zeta.size(); ++i)
    zeta(i) = sample_gamma(rng, shape, tau + state.psi(i));
  return zeta;
}

Matrix update_sigma(const GibbsState& state, const Dataset& data, const Hyperparameters& hyper,
                    RngStream& rng) {
  const Matrix resid = data.y() - data.x() * state.b;
  const Matrix scaled_b = state.psi.array().rsqrt().matrix().asDiagonal() * state.b;
  const Matrix scatter = resid.transpose() * resid + scaled_b.transpose() * scaled_b;
  return detail::draw_sigma_conditional(scatter, static_cast<double>(data.n() + data.p()),
                                        hyper.d, hyper.k_value(), rng);
}

void TpbnPrior::initialize(GibbsState& state, const Hyperparameters& hyper) const {
  const Eigen::Index p = state.b.rows();
  state.psi = Vector::Ones(p);
  state.zeta = Vector::Constant(p, hyper.a / hyper.tau_value());
}

void TpbnPrior::update(GibbsState& state, const Hyperparameters& hyper, RngStream& rng,
                       GigGuard& guard) const {
  state.psi = update_psi(state, hyper, rng, &guard);
  state.zeta = update_zeta(state, hyper, rng);
}

// --- Chain ------------------------------------------------------------------

ChainOutput run_chain(const Dataset& data, const Hyperparameters& hyper,
                      const ChainOptions& options) {
  return run_chain(data, hyper, TpbnPrior(), options);
}

ChainOutput run_chain(const Dataset& data, const Hyperparameters& hyper,
                      const LocalScalePrior& prior, const ChainOptions& options) {
  const Hyperparameters resolved = hyper.resolve(data);
  RngStream rng(resolved.seed, options.stream_id);

  ChainOutput out;
  out.p = data.p();
  out.q = data.q();
  out.hyper = resolved;
  out.draw_count = static_cast<std::size_t>((resolved.iterations - resolved.burn_in) / resolved.thin);
  const auto b_stride = static_cast<std::size_t>(out.p * out.q);
  const auto s_stride = static_cast<std::size_t>(out.q * out.q);
  out.b_draws.reserve(out.draw_count * b_stride);
  if (options.store_sigma) out.sigma_draws.reserve(out.draw_count * s_stride);

  const auto start = std::chrono::steady_clock::now();

  GibbsState state = initialize_state(data, resolved, rng);
  prior.initialize(state, resolved);
  const CoefficientSampler b_sampler(data);
  StreamNoise noise(rng);
  GigGuard guard;
  RowMatrix row_major;

  for (std::uint64_t it = 0; it < resolved.iterations; ++it) {
    try {
      state.b = b_sampler.draw(state.sigma, state.psi, noise);
      prior.update(state, resolved, rng, guard);
      state.sigma = update_sigma(state, data, resolved, rng);
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(it) + ": " + e.what());
    }
    if (!(state.psi.array() > 0.0).all() || !(state.zeta.array() > 0.0).all() ||
        !state.b.allFinite())
      throw NumericError("iteration " + std::to_string(it) + ": chain left the support");

    if (it >= resolved.burn_in && (it - resolved.burn_in + 1) % resolved.thin == 0) {
      row_major = state.b;
      out.b_draws.insert(out.b_draws.end(), row_major.data(), row_major.data() + b_stride);
      if (options.store_sigma) {
        row_major = state.sigma;
        out.sigma_draws.insert(out.sigma_draws.end(), row_major.data(),
                               row_major.data() + s_stride);
      }
    }
  }

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  out.wall_time_s = elapsed.count();
  out.iterations_per_minute =
      out.wall_time_s > 0.0 ? 60.0 * static_cast<double>(resolved.iterations) / out.wall_time_s : 0.0;
  out.clamped_chi = guard.clamped_chi;
  return out;
}

}  // namespace mbsp
