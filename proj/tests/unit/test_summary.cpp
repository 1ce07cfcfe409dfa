#include <doctest.h>

#include <algorithm>
#include <vector>

#include "mbsp/error.hpp"
#include "mbsp/summary.hpp"

using mbsp::Matrix;

namespace {

// draws for a p x q problem, draw-major and row-major inside each draw
std::vector<double> random_draws(std::uint64_t seed, Eigen::Index p, Eigen::Index q,
                                 std::size_t count, double shift) {
  mbsp::RngStream rng(seed);
  std::vector<double> out(count * static_cast<std::size_t>(p * q));
  for (auto& v : out) v = shift + rng.normal();
  return out;
}

}  // namespace

TEST_SUITE("summary") {
  TEST_CASE("type-7 quantiles") {
    const std::vector<double> two{10.0, 20.0};
    CHECK(mbsp::quantile(two, 0.5) == doctest::Approx(15.0));
    const std::vector<double> four{1.0, 2.0, 3.0, 4.0};
    CHECK(mbsp::quantile(four, 0.0) == 1.0);
    CHECK(mbsp::quantile(four, 0.25) == doctest::Approx(1.75));
    CHECK(mbsp::quantile(four, 1.0) == 4.0);
    const std::vector<double> one{3.0};
    CHECK(mbsp::quantile(one, 0.7) == 3.0);
  }

  TEST_CASE("odd-count median") {
    const std::vector<double> draws{3.0, 1.0, 2.0};
    const auto s = mbsp::summarize_draws(draws, 1, 1, 3, 0.95);
    CHECK(s.median(0, 0) == 2.0);
  }

  TEST_CASE("selection rule") {
    Matrix lo(3, 2);
    Matrix hi(3, 2);
    lo << -0.1, -0.5, 0.3, -1.0, -2.0, -0.4;
    hi << 0.2, 0.5, 0.9, 1.0, -0.1, 0.4;
    const auto active = mbsp::select_rows(lo, hi);
    CHECK_FALSE(active[0]);
    CHECK(active[1]);
    CHECK(active[2]);
  }

  TEST_CASE("summary invariants") {
    const auto draws = random_draws(1, 4, 3, 500, 0.0);
    const auto s = mbsp::summarize_draws(draws, 4, 3, 500, 0.9);
    CHECK(s.level == 0.9);
    CHECK((s.ci_lower.array() <= s.median.array()).all());
    CHECK((s.median.array() <= s.ci_upper.array()).all());
    CHECK(s.active_rows == mbsp::select_rows(s.ci_lower, s.ci_upper));
  }

  TEST_CASE("a row far from zero is active") {
    auto draws = random_draws(2, 3, 2, 400, 0.0);
    for (std::size_t d = 0; d < 400; ++d) draws[d * 6 + 2] += 10.0;  // entry (1, 0)
    const auto s = mbsp::summarize_draws(draws, 3, 2, 400, 0.95);
    CHECK(s.active_rows[1]);
    CHECK(s.active_count() >= 1);
  }

  TEST_CASE("intervals nest as the level grows") {
    const auto draws = random_draws(3, 5, 2, 1000, 0.3);
    const auto narrow = mbsp::summarize_draws(draws, 5, 2, 1000, 0.5);
    const auto wide = mbsp::summarize_draws(draws, 5, 2, 1000, 0.95);
    CHECK((wide.ci_lower.array() <= narrow.ci_lower.array()).all());
    CHECK((narrow.ci_upper.array() <= wide.ci_upper.array()).all());
    CHECK(narrow.median == wide.median);
  }

  TEST_CASE("draw order does not matter") {
    auto draws = random_draws(4, 3, 3, 301, -0.2);
    const auto s1 = mbsp::summarize_draws(draws, 3, 3, 301, 0.95);
    // Reverse the order of whole draws.
    const std::size_t stride = 9;
    std::vector<double> reversed(draws.size());
    for (std::size_t d = 0; d < 301; ++d)
      std::copy_n(draws.begin() + static_cast<std::ptrdiff_t>(d * stride), stride,
                  reversed.begin() + static_cast<std::ptrdiff_t>((300 - d) * stride));
    const auto s2 = mbsp::summarize_draws(reversed, 3, 3, 301, 0.95);
    CHECK(s1.median == s2.median);
    CHECK(s1.ci_lower == s2.ci_lower);
    CHECK(s1.ci_upper == s2.ci_upper);
    CHECK(s1.active_rows == s2.active_rows);
  }

  TEST_CASE("summarize_chain reads the chain layout") {
    mbsp::ChainOutput chain;
    chain.p = 2;
    chain.q = 1;
    chain.draw_count = 3;
    chain.b_draws = {1.0, 5.0, 2.0, 6.0, 3.0, 7.0};
    const auto s = mbsp::summarize_chain(chain);
    CHECK(s.median(0, 0) == 2.0);
    CHECK(s.median(1, 0) == 6.0);
    CHECK(s.active_count() == 2);
  }

  TEST_CASE("errors") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(mbsp::summarize_draws(one, 1, 1, 1, 0.95), mbsp::ParameterError);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(mbsp::summarize_draws(two, 1, 1, 2, 1.0), mbsp::ParameterError);
    CHECK_THROWS_AS(mbsp::summarize_draws(two, 1, 1, 2, 0.0), mbsp::ParameterError);
  }
}
