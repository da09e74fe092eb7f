#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bcm/error.hpp"
#include "bcm/math.hpp"

namespace bcm {
namespace {

TEST(LogRising, MatchesLgammaDifference) {
  for (double a : {0.01, 0.3, 1.0, 7.5, 51.0}) {
    for (std::uint64_t n : {0u, 1u, 5u, 16u, 17u, 400u}) {
      const double want = std::lgamma(a + n) - std::lgamma(a);
      EXPECT_NEAR(log_rising(a, n), want, 1e-10 * std::max(1.0, std::abs(want))) << a << " " << n;
    }
  }
}

TEST(LogRising, StaysAccurateForHugePseudoCounts) {
  // lambda (1 + c) with c = 1e8: one extra count adds log(a).
  const double a = 1.0 + 1e8;
  EXPECT_NEAR(log_rising(a, 1), std::log(a), 1e-14 * std::log(a));
  EXPECT_NEAR(log_rising(a, 3), std::log(a) + std::log(a + 1) + std::log(a + 2), 1e-12);
}

TEST(LogRising, FiniteForMillionCounts) {
  EXPECT_TRUE(std::isfinite(log_rising(1e8, 1'000'000)));
  EXPECT_TRUE(std::isfinite(log_rising(1e-3, 1'000'000)));
}

TEST(LogBetaRatio, EqualsDifferenceOfLogBetas) {
  const std::vector<double> g{1.0, 51.0, 1.0};
  const std::vector<std::uint32_t> n{3, 10, 0};
  std::vector<double> gn{4.0, 61.0, 1.0};
  EXPECT_NEAR(log_beta_ratio(g, n), log_multivariate_beta(gn) - log_multivariate_beta(g), 1e-11);
}

TEST(LogBetaRatio, ZeroCountsGiveExactlyZero) {
  const std::vector<double> g{0.7, 2.0};
  const std::vector<std::uint32_t> n{0, 0};
  EXPECT_EQ(log_beta_ratio(g, n), 0.0);
}

TEST(NormalizeLogWeights, HandlesLargeMagnitudes) {
  std::vector<double> w{-1e6, -1e6 + std::log(3.0)};
  normalize_log_weights(w);
  // The inputs themselves carry ~1e-10 absolute rounding at this magnitude.
  EXPECT_NEAR(w[0], 0.25, 1e-9);
  EXPECT_NEAR(w[1], 0.75, 1e-9);
  EXPECT_NEAR(w[0] + w[1], 1.0, 1e-15);
}

TEST(NormalizeWeights, RejectsZeroTotal) {
  std::vector<double> w{0.0, 0.0};
  EXPECT_THROW(normalize_weights(w), NumericalError);
}

TEST(LogSumExp, Basic) {
  std::vector<double> v{std::log(1.0), std::log(2.0), std::log(5.0)};
  EXPECT_NEAR(log_sum_exp(v), std::log(8.0), 1e-14);
}

}  // namespace
}  // namespace bcm
