#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mbsp/dataset.hpp"
#include "mbsp/distributions.hpp"
#include "mbsp/linalg.hpp"
#include "mbsp/rng.hpp"

namespace mbsp {

// Prior and chain settings. `tau` and `k` may be left unset, in which case
// resolve() derives them from the data (default_tau and default_k).
struct Hyperparameters {
  double u = 0.5;
  double a = 0.5;
  std::optional<double> tau;
  double d = 3.0;
  std::optional<double> k;
  std::uint64_t iterations = 15000;
  std::uint64_t burn_in = 5000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;

  // Throws ParameterError on any out-of-domain value.
  void validate() const;

  // Copy with tau and k filled in from `data` when unset.
  Hyperparameters resolve(const Dataset& data) const;

  double tau_value() const;
  double k_value() const;
};

// One state of the Gibbs chain.
struct GibbsState {
  Matrix b;      // p x q coefficients
  Matrix sigma;  // q x q error covariance
  Vector psi;    // local variances, length p
  Vector zeta;   // local rates, length p
};

// Stored post-burn-in draws. Draws are laid out draw-major, each p x q
// matrix row-major, which is also the on-disk order of the chain file.
struct ChainOutput {
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  std::size_t draw_count = 0;
  std::vector<double> b_draws;
  std::vector<double> sigma_draws;  // empty unless requested
  Hyperparameters hyper;
  double wall_time_s = 0.0;
  double iterations_per_minute = 0.0;
  std::uint64_t clamped_chi = 0;

  Eigen::Map<const RowMatrix> b_draw(std::size_t index) const;
  Eigen::Map<const RowMatrix> sigma_draw(std::size_t index) const;
  bool has_sigma() const noexcept { return !sigma_draws.empty(); }
};

struct ChainOptions {
  std::uint64_t stream_id = 0;
  bool store_sigma = false;
};

// 1 / (p sqrt(n ln n)). Throws ParameterError for n < 2 or p < 1.
double default_tau(Eigen::Index n, Eigen::Index p);

// Ridge estimate (X^T X + I)^-1 X^T Y, computed through the n x n dual
// system when p > n.
Matrix ridge_estimate(const Dataset& data);

// Pooled sample variance (divisor nq - 1) of every entry of Y - X b_init.
double default_k(const Dataset& data, const Matrix& b_init);

// B = ridge estimate, Sigma = residual covariance + 1e-6 I, psi = 1,
// zeta = a / tau. `hyper` must already be resolved.
GibbsState initialize_state(const Dataset& data, const Hyperparameters& hyper, RngStream& rng);

enum class CoefficientPath { automatic, naive, fast };

// Draws B | psi, Sigma, Y ~ MN(A^-1 X^T Y, A^-1, Sigma), A = X^T X + D_psi^-1.
// The naive path factors the p x p matrix A; the fast path works with the
// n x n matrix X D_psi X^T + I and costs O(n^2 p).
class CoefficientSampler {
 public:
  explicit CoefficientSampler(const Dataset& data, CoefficientPath path = CoefficientPath::automatic);

  CoefficientPath path() const noexcept { return path_; }

  Matrix draw(const Matrix& sigma, const Vector& psi, GaussianNoise& noise) const;

 private:
  Matrix draw_naive(const Matrix& sigma, const Vector& psi, GaussianNoise& noise) const;
  Matrix draw_fast(const Matrix& sigma, const Vector& psi, GaussianNoise& noise) const;

  const Dataset* data_;
  CoefficientPath path_;
  Matrix xtx_;
  Matrix xty_;
};

Matrix update_b_naive(const GibbsState& state, const Dataset& data, RngStream& rng);
Matrix update_b_fast(const GibbsState& state, const Dataset& data, RngStream& rng);

// psi_i ~ GIG(u - q/2, b_i Sigma^-1 b_i^T, 2 zeta_i).
Vector update_psi(const GibbsState& state, const Hyperparameters& hyper, RngStream& rng,
                  GigGuard* guard = nullptr);

// zeta_i ~ Gamma(a + u, rate = tau + psi_i).
Vector update_zeta(const GibbsState& state, const Hyperparameters& hyper, RngStream& rng);

// Sigma ~ IW(d + n + p, k I + (Y - XB)^T (Y - XB) + B^T D_psi^-1 B).
Matrix update_sigma(const GibbsState& state, const Dataset& data, const Hyperparameters& hyper,
                    RngStream& rng);

// Hierarchy over the local variances psi. Only the TPBN mixture ships; the
// interface keeps the chain independent of that choice.
class LocalScalePrior {
 public:
  virtual ~LocalScalePrior() = default;
  virtual void initialize(GibbsState& state, const Hyperparameters& hyper) const = 0;
  virtual void update(GibbsState& state, const Hyperparameters& hyper, RngStream& rng,
                      GigGuard& guard) const = 0;
};

// psi_i | zeta_i ~ Gamma(u, zeta_i), zeta_i ~ Gamma(a, tau).
class TpbnPrior final : public LocalScalePrior {
 public:
  void initialize(GibbsState& state, const Hyperparameters& hyper) const override;
  void update(GibbsState& state, const Hyperparameters& hyper, RngStream& rng,
              GigGuard& guard) const override;
};

// Systematic scan B -> psi -> zeta -> Sigma. B uses the fast path iff p > n.
ChainOutput run_chain(const Dataset& data, const Hyperparameters& hyper,
                      const ChainOptions& options = {});
ChainOutput run_chain(const Dataset& data, const Hyperparameters& hyper,
                      const LocalScalePrior& prior, const ChainOptions& options);

namespace detail {

Matrix update_b(const GibbsState& state, const Dataset& data, CoefficientPath path,
                GaussianNoise& noise);

// Conjugate Sigma draw given the accumulated cross-product `scatter`
// (residual plus prior contributions, without the k I term) and the number
// of rows `count` that contributed to it (n + p in the full model).
Matrix draw_sigma_conditional(const Matrix& scatter, double count, double d, double k,
                              RngStream& rng);

}  // namespace detail

}  // namespace mbsp
