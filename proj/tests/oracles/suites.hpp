#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Moment and KS checks for every random-variate generator: normal, Gamma,
// GIG (reductions, moments, regime coverage), inverse-Wishart, matrix-normal.
std::vector<CheckResult> kernel_suite(std::uint64_t seed);

// Each Gibbs full conditional against its own quadrature or Monte Carlo
// oracle, plus a stationarity run on a conjugate toy problem.
std::vector<CheckResult> conditional_suite(std::uint64_t seed);

// Zero-noise conditional means of the naive and fast B paths on random
// problems with p <= 50 and q <= 4; passes when all agree within `tol`.
CheckResult woodbury_suite(std::uint64_t seed, int problems = 100, double tol = 1e-8);

// Normal / inverse-gamma mixture by quadrature against the closed-form
// Student-t density at 20 abscissae.
CheckResult scale_mixture_suite(double tol = 1e-6);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace oracle
