#pragma once

#include <span>
#include <vector>

#include "mbsp/linalg.hpp"
#include "mbsp/sampler.hpp"

namespace mbsp {

// Entrywise posterior median and equal-tailed credible intervals, plus the
// row selection rule: row i is active iff some interval in that row
// excludes zero.
struct PosteriorSummary {
  Matrix median;
  Matrix ci_lower;
  Matrix ci_upper;
  double level = 0.95;
  std::vector<bool> active_rows;

  std::size_t active_count() const;
};

// Type-7 sample quantile: h = (n - 1) prob, linear interpolation between
// the order statistics around h. `sorted_draws` must be ascending and
// non-empty.
double quantile(std::span<const double> sorted_draws, double prob);

PosteriorSummary summarize_chain(const ChainOutput& chain, double level = 0.95);

// Same, for draws stored draw-major with row-major p x q blocks.
PosteriorSummary summarize_draws(std::span<const double> draws, Eigen::Index p, Eigen::Index q,
                                 std::size_t draw_count, double level = 0.95);

// Applies the selection rule to precomputed interval bounds.
std::vector<bool> select_rows(const Matrix& ci_lower, const Matrix& ci_upper);

}  // namespace mbsp
