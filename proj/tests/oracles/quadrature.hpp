#pragma once

#include <functional>
#include <vector>

namespace oracle {

// Numerical integration of densities on (0, inf). Densities are supplied as
// log f(x) up to an additive constant; integrals run over t = log x so the
// integrand is smooth and decays doubly exponentially for the families used
// here.
using LogDensity = std::function<double(double)>;

// Integral of g(x) f(x) / Z over (0, inf), where Z = integral of f.
double expectation(const LogDensity& log_f, const std::function<double(double)>& g);

// Tabulated CDF of a density on (0, inf): cumulative Gauss-Kronrod sums on a
// log-spaced grid that covers everything within exp(-60) of the peak, then
// linear interpolation in t = log x.
class TabulatedCdf {
 public:
  TabulatedCdf(const LogDensity& log_f, std::size_t cells = 4000);
  double operator()(double x) const;
  double median() const;

 private:
  std::vector<double> t_;
  std::vector<double> cdf_;
};

// log of the unnormalized GIG density x^(lambda-1) exp(-(chi/x + rho x)/2).
LogDensity gig_log_density(double lambda, double chi, double rho);
// log of the unnormalized Gamma(shape, rate) density.
LogDensity gamma_log_density(double shape, double rate);
// log of the unnormalized Inverse-Gamma(shape, scale) density.
LogDensity inverse_gamma_log_density(double shape, double scale);

// Marginal density of b when b | xi ~ N(0, s xi) and xi ~ IG(alpha, gamma / 2),
// computed by quadrature over xi.
double normal_inverse_gamma_mixture(double b, double s, double alpha, double gamma);
// Closed-form Student-t density Gamma(alpha + 1/2) / (Gamma(alpha) sqrt(pi s gamma))
// (1 + b^2 / (s gamma))^-(alpha + 1/2).
double student_t_from_mixture(double b, double s, double alpha, double gamma);

}  // namespace oracle
