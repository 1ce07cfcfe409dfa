#pragma once

#include <cstdint>

#include "mbsp/linalg.hpp"
#include "mbsp/rng.hpp"

namespace mbsp {

// Generalized inverse Gaussian with density proportional to
//   x^(lambda - 1) exp(-(chi / x + rho * x) / 2),   x > 0.
struct GigParams {
  double lambda = 0.0;
  double chi = 0.0;
  double rho = 0.0;

  // Throws ParameterError unless the density is normalizable.
  void validate() const;
};

// Counts how often a degenerate GIG conditional had to be regularized.
struct GigGuard {
  std::uint64_t clamped_chi = 0;
};

// Smallest chi used when lambda <= 0; below it the conditional is improper.
inline constexpr double kMinGigChi = 1e-30;

Matrix sample_std_normal_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols);

// Gamma(shape, rate); mean shape / rate.
double sample_gamma(RngStream& rng, double shape, double rate);

// Draws from GIG(lambda, chi, rho). When `guard` is non-null, chi below
// kMinGigChi with lambda <= 0 is clamped and counted instead of rejected.
double sample_gig(RngStream& rng, GigParams params, GigGuard* guard = nullptr);

// Inverse-Wishart parametrized by shape_d so that E[Sigma] = scale / (shape_d - 2)
// (degrees of freedom shape_d + q - 1). Sampled as the inverse of a Bartlett
// Wishart draw with scale^-1.
Matrix sample_inverse_wishart(RngStream& rng, double shape_d, const Matrix& scale);

// M + chol(U) Z chol(V)^T.
Matrix sample_matrix_normal_naive(RngStream& rng, const Matrix& mean, const Matrix& row_cov,
                                  const Matrix& col_cov);

}  // namespace mbsp
