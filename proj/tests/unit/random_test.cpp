#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "bcm/random.hpp"

namespace bcm {
namespace {

TEST(Random, SameSeedSameStream) {
  Rng a = make_rng(42, 3), b = make_rng(42, 3), c = make_rng(42, 4);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}

TEST(Random, UniformOpenNeverHitsEndpoints) {
  Rng rng = make_rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = uniform_open(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Random, DirichletSumsToOneEvenForTinyShapes) {
  Rng rng = make_rng(7);
  for (double a : {1e-3, 0.0333, 1.0, 51.0, 1e6}) {
    for (int k = 0; k < 200; ++k) {
      const auto d = sample_symmetric_dirichlet(4, a, rng);
      ASSERT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-12);
      for (double x : d) ASSERT_GE(x, 0.0);
    }
  }
}

TEST(Random, DirichletMeanMatchesShape) {
  Rng rng = make_rng(11);
  const std::vector<double> alpha{1.0, 51.0, 1.0};
  std::vector<double> mean(3, 0.0);
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    const auto d = sample_dirichlet(alpha, rng);
    for (int v = 0; v < 3; ++v) mean[v] += d[v] / draws;
  }
  EXPECT_NEAR(mean[1], 51.0 / 53.0, 0.005);
  EXPECT_NEAR(mean[0], 1.0 / 53.0, 0.003);
}

TEST(Random, CategoricalSkipsZeroWeights) {
  Rng rng = make_rng(3);
  const std::vector<double> w{0.0, 2.0, 0.0, 1.0};
  std::vector<int> hits(4, 0);
  for (int k = 0; k < 30000; ++k) ++hits[sample_categorical(w, rng)];
  EXPECT_EQ(hits[0], 0);
  EXPECT_EQ(hits[2], 0);
  EXPECT_NEAR(hits[1] / 30000.0, 2.0 / 3.0, 0.015);
}

}  // namespace
}  // namespace bcm
