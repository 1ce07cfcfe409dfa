#include "mbsp/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "mbsp/error.hpp"

namespace mbsp {
namespace {

// --- GIG helpers -----------------------------------------------------------
// The generators below sample the standardized two-parameter form
//   g(x) ∝ x^(lambda - 1) exp(-omega / 2 (x + 1/x)),  lambda >= 0, omega > 0,
// following the three-regime scheme of Hörmann & Leydold (2014): a
// ratio-of-uniforms with mode shift for lambda > 2 or omega > 3, a plain
// ratio-of-uniforms for moderate parameters, and a dominating-hat rejection
// sampler for the log-concavity-free corner lambda < 1, omega <= 0.2.

double gig_mode(double lambda, double omega) {
  if (lambda >= 1.0)
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

double gig_rou_shift(RngStream& rng, double lambda, double omega) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  // Roots of the cubic bounding the shifted acceptance region.
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;

  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

double gig_rou_noshift(RngStream& rng, double lambda, double omega) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym =
      ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);

  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

double gig_concave_hat(RngStream& rng, double lambda, double omega) {
  const double xm = gig_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  const double two_over_omega = 2.0 / omega;

  double k1, k2, area0, area1, area2;
  area0 = k0 * x0;
  if (x0 >= two_over_omega) {
    k1 = 0.0;
    area1 = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area2 = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area1 = lambda == 0.0
                ? k1 * std::log(2.0 / (omega * omega))
                : k1 / lambda * (std::pow(two_over_omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(two_over_omega, lambda - 1.0);
    area2 = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area0 + area1 + area2;
  const double tail_start = x0 > two_over_omega ? x0 : two_over_omega;

  for (;;) {
    double v = total * rng.uniform();
    double x, hx;
    if (v <= area0) {
      x = x0 * v / area0;
      hx = k0;
    } else if ((v -= area0) <= area1) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area1;
      x = -two_over_omega *
          std::log(std::exp(-omega / 2.0 * tail_start) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
  }
}

}  // namespace

void GigParams::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(chi) || !std::isfinite(rho))
    throw ParameterError("GIG parameters must be finite");
  if (chi < 0.0 || rho < 0.0) throw ParameterError("GIG chi and rho must be non-negative");
  if (chi == 0.0 && rho == 0.0) throw ParameterError("GIG chi and rho cannot both be zero");
  if (chi == 0.0 && lambda <= 0.0)
    throw ParameterError("GIG with chi = 0 requires lambda > 0 (got " + std::to_string(lambda) + ")");
  if (rho == 0.0 && lambda >= 0.0)
    throw ParameterError("GIG with rho = 0 requires lambda < 0 (got " + std::to_string(lambda) + ")");
}

Matrix sample_std_normal_matrix(RngStream& rng, Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1) throw ParameterError("normal matrix dimensions must be positive");
  Matrix z(rows, cols);
  StreamNoise(rng).fill(z);
  return z;
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
    throw ParameterError("gamma shape and rate must be positive and finite");

  // Marsaglia & Tsang; shapes below one are boosted by U^(1/shape).
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(rng.uniform(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return boost * d * v / rate;
  }
}

double sample_gig(RngStream& rng, GigParams params, GigGuard* guard) {
  if (guard != nullptr && params.lambda <= 0.0 && params.chi < kMinGigChi && params.rho > 0.0) {
    params.chi = kMinGigChi;
    ++guard->clamped_chi;
  }
  params.validate();

  const double lambda = params.lambda;
  if (params.chi == 0.0) return sample_gamma(rng, lambda, params.rho / 2.0);
  if (params.rho == 0.0) return (params.chi / 2.0) / sample_gamma(rng, -lambda, 1.0);

  // X ~ GIG(lambda, chi, rho)  <=>  1 / X ~ GIG(-lambda, rho, chi).
  const double abs_lambda = std::abs(lambda);
  const double alpha = std::sqrt(params.chi / params.rho);
  const double omega = std::sqrt(params.chi * params.rho);

  double x;
  if (abs_lambda > 2.0 || omega > 3.0)
    x = gig_rou_shift(rng, abs_lambda, omega);
  else if (abs_lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2)
    x = gig_rou_noshift(rng, abs_lambda, omega);
  else
    x = gig_concave_hat(rng, abs_lambda, omega);

  return lambda < 0.0 ? alpha / x : alpha * x;
}

Matrix sample_inverse_wishart(RngStream& rng, double shape_d, const Matrix& scale) {
  if (!(shape_d > 0.0) || !std::isfinite(shape_d))
    throw ParameterError("inverse-Wishart shape must be positive");
  if (scale.rows() != scale.cols() || scale.rows() == 0)
    throw ParameterError("inverse-Wishart scale must be square and non-empty");
  const Eigen::Index q = scale.rows();
  const double dof = shape_d + static_cast<double>(q) - 1.0;

  // If scale = C C^T and A is the Bartlett factor of Wishart(dof, I), then
  // C^-T A A^T C^-1 ~ Wishart(dof, scale^-1), whose inverse is
  // C A^-T A^-1 C^T.
  const Matrix c = cholesky_lower(scale, "inverse-Wishart scale");
  Matrix bartlett = Matrix::Zero(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    bartlett(i, i) = std::sqrt(2.0 * sample_gamma(rng, 0.5 * (dof - static_cast<double>(i)), 1.0));
    for (Eigen::Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  // t = C A^-T, i.e. solve A t^T = C^T.
  const Matrix t_transposed =
      bartlett.triangularView<Eigen::Lower>().solve(c.transpose());
  Matrix sigma = t_transposed.transpose() * t_transposed;
  symmetrize(sigma);
  return sigma;
}

Matrix sample_matrix_normal_naive(RngStream& rng, const Matrix& mean, const Matrix& row_cov,
                                  const Matrix& col_cov) {
  if (row_cov.rows() != mean.rows() || row_cov.cols() != mean.rows() ||
      col_cov.rows() != mean.cols() || col_cov.cols() != mean.cols())
    throw ParameterError("matrix-normal covariance dimensions do not match the mean");
  const Matrix lu = cholesky_lower(row_cov, "matrix-normal row covariance");
  const Matrix lv = cholesky_lower(col_cov, "matrix-normal column covariance");
  const Matrix z = sample_std_normal_matrix(rng, mean.rows(), mean.cols());
  return mean + lu * z * lv.transpose();
}

}  // namespace mbsp
