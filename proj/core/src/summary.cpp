#include "mbsp/summary.hpp"

#include <algorithm>
#include <cmath>

#include "mbsp/error.hpp"

namespace mbsp {

std::size_t PosteriorSummary::active_count() const {
  return static_cast<std::size_t>(std::count(active_rows.begin(), active_rows.end(), true));
}

double quantile(std::span<const double> sorted_draws, double prob) {
  if (sorted_draws.empty()) throw ParameterError("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw ParameterError("quantile probability outside [0, 1]");
  const double h = static_cast<double>(sorted_draws.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted_draws.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted_draws[lo] + frac * (sorted_draws[hi] - sorted_draws[lo]);
}

std::vector<bool> select_rows(const Matrix& ci_lower, const Matrix& ci_upper) {
  std::vector<bool> active(static_cast<std::size_t>(ci_lower.rows()), false);
  for (Eigen::Index i = 0; i < ci_lower.rows(); ++i)
    for (Eigen::Index j = 0; j < ci_lower.cols(); ++j)
      if (ci_lower(i, j) > 0.0 || ci_upper(i, j) < 0.0) active[static_cast<std::size_t>(i)] = true;
  return active;
}

PosteriorSummary summarize_draws(std::span<const double> draws, Eigen::Index p, Eigen::Index q,
                                 std::size_t draw_count, double level) {
  if (draw_count < 2) throw ParameterError("summarizing needs at least 2 stored draws");
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("credible level must lie in (0, 1)");
  const auto stride = static_cast<std::size_t>(p * q);
  if (draws.size() != stride * draw_count) throw ParameterError("draw buffer size mismatch");

  PosteriorSummary s;
  s.level = level;
  s.median.resize(p, q);
  s.ci_lower.resize(p, q);
  s.ci_upper.resize(p, q);
  const double tail = 0.5 * (1.0 - level);

  std::vector<double> column(draw_count);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      const auto offset = static_cast<std::size_t>(i * q + j);
      for (std::size_t t = 0; t < draw_count; ++t) column[t] = draws[t * stride + offset];
      std::sort(column.begin(), column.end());
      s.median(i, j) = quantile(column, 0.5);
      s.ci_lower(i, j) = quantile(column, tail);
      s.ci_upper(i, j) = quantile(column, 1.0 - tail);
    }
  }
  s.active_rows = select_rows(s.ci_lower, s.ci_upper);
  return s;
}

PosteriorSummary summarize_chain(const ChainOutput& chain, double level) {
  if (chain.draw_count == 0) throw ParameterError("chain has no stored draws");
  return summarize_draws(chain.b_draws, chain.p, chain.q, chain.draw_count, level);
}

}  // namespace mbsp
