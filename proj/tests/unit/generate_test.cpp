#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "bcm/error.hpp"
#include "bcm/generate.hpp"
#include "bcm/state.hpp"
#include "test_util.hpp"

namespace bcm {
namespace {

void expect_simplex(const std::vector<double>& p) {
  for (double v : p) EXPECT_GE(v, 0.0);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
}

TEST(SamplePrior, ProbabilityVectorsNormalize) {
  const auto fs = testing::numeric_space({3, 5, 2});
  const auto pool = uniform_pool(fs, 10, 1);
  const auto draw = sample_prior(fs, 30, Hyperparams{4, 0.5, 0.5, 0.7, 20.0, {}}, pool, 2);
  ASSERT_EQ(draw.phi.size(), 4u);
  for (const auto& s : draw.phi)
    for (const auto& phi : s) expect_simplex(phi);
  ASSERT_EQ(draw.pi.size(), 30u);
  for (const auto& pi : draw.pi) expect_simplex(pi);
  EXPECT_NO_THROW(draw.latent.validate(30, 3, pool.num_observations()));
}

TEST(SamplePrior, DeterministicInSeed) {
  const auto fs = testing::numeric_space({3, 3});
  const auto pool = uniform_pool(fs, 4, 9);
  const Hyperparams h{2, 1.0, 0.5, 1.0, 5.0, {}};
  const auto a = sample_prior(fs, 12, h, pool, 42);
  const auto b = sample_prior(fs, 12, h, pool, 42);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.latent, b.latent);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_FALSE(sample_prior(fs, 12, h, pool, 43).data == a.data);
}

TEST(SamplePrior, RejectsUnusablePool) {
  const auto fs = testing::numeric_space({3});
  const auto other = uniform_pool(testing::numeric_space({4}), 3, 1);
  EXPECT_THROW(sample_prior(fs, 5, Hyperparams{}, other, 1), ConfigError);
}

TEST(SamplePrior, ZeroCopyStrengthIgnoresPrototype) {
  // Mass on the prototype value should match any other value, 1/V on average.
  const auto fs = testing::numeric_space({4});
  const auto pool = uniform_pool(fs, 6, 3);
  const Hyperparams h{2, 1.0, 1.0 - 1e-9, 1.0, 0.0, {}};
  double at_proto = 0.0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const auto draw = sample_prior(fs, 1, h, pool, 1000 + t);
    for (std::size_t s = 0; s < 2; ++s) at_proto += draw.phi[s][0][pool.at(draw.latent.prototype(s), 0)];
  }
  EXPECT_NEAR(at_proto / (2 * trials), 0.25, 0.02);
}

TEST(SamplePrior, HugeCopyStrengthCopiesPrototype) {
  const auto fs = testing::numeric_space({10, 3, 7});
  const auto pool = uniform_pool(fs, 20, 4);
  const Hyperparams h{3, 1.0, 1.0 - 1e-12, 1.0, 1e6, {}};
  const auto draw = sample_prior(fs, 400, h, pool, 5);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < 400; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const auto s = draw.latent.assignment(i, j);
      agree += draw.data.at(i, j) == pool.at(draw.latent.prototype(s), j);
    }
  EXPECT_GE(static_cast<double>(agree) / 1200.0, 0.99);
}

TEST(SamplePrior, SubspaceDensityMatchesQ) {
  const auto fs = testing::numeric_space({2, 2, 2, 2});
  const auto pool = uniform_pool(fs, 4, 1);
  for (double q : {0.2, 0.7}) {
    double ones = 0.0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t)
      ones += sample_prior(fs, 1, Hyperparams{5, 1.0, q, 1.0, 1.0, {}}, pool, t).latent.omega_density();
    EXPECT_NEAR(ones / trials, q, 0.02);
  }
}

TEST(ResampleData, KeepsLatentsAndChangesCells) {
  const auto fs = testing::numeric_space({3, 3});
  const auto pool = uniform_pool(fs, 5, 2);
  auto draw = sample_prior(fs, 50, Hyperparams{2, 1.0, 0.5, 1.0, 3.0, {}}, pool, 7);
  const auto before = draw.data;
  Rng rng = make_rng(8);
  resample_data(draw.data, draw.latent, pool, Hyperparams{2, 1.0, 0.5, 1.0, 3.0, {}}, rng);
  EXPECT_EQ(draw.data.num_observations(), 50u);
  EXPECT_FALSE(draw.data == before);
}

TEST(Smiley, TablePresetRuns) {
  const auto smiley = make_smiley_dataset(0);
  EXPECT_EQ(smiley.data.num_observations(), 240u);
  EXPECT_EQ(smiley.data.num_features(), 6u);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(smiley.data.features().cardinality(j), 3u);
  EXPECT_EQ(smiley.truth.num_clusters(), 3u);
  ASSERT_TRUE(smiley.data.has_labels());
  EXPECT_EQ(smiley.data.labels()->num_classes(), 3u);
  // Each planted cluster dominates some observations.
  const auto counts = CountTables::rebuild(smiley.data, smiley.truth);
  for (std::size_t s = 0; s < 3; ++s) EXPECT_GT(counts.cluster_total(s), 0u);
  // Prototypes are rows of the dataset.
  EXPECT_NO_THROW(smiley.truth.validate(240, 6, 240));
}

TEST(Smiley, DeterministicInSeed) {
  const auto a = make_smiley_dataset(12);
  const auto b = make_smiley_dataset(12);
  EXPECT_EQ(a.data, b.data);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.pi, b.pi);
}

TEST(Smiley, TwoImportantFeaturesPerCluster) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto smiley = make_smiley_dataset(seed);
    for (std::size_t s = 0; s < 3; ++s) {
      const auto sub = smiley.truth.subspace(s);
      EXPECT_EQ(std::count(sub.begin(), sub.end(), 1), 2);
      EXPECT_TRUE(std::equal(sub.begin(), sub.end(), smiley_subspaces()[s].begin()));
    }
  }
}

TEST(Smiley, MixtureWeightsNearlyDegenerate) {
  const auto smiley = make_smiley_dataset(2);
  std::size_t peaked = 0;
  for (const auto& pi : smiley.pi) {
    expect_simplex(pi);
    peaked += *std::max_element(pi.begin(), pi.end()) >= 0.9;
  }
  EXPECT_GE(static_cast<double>(peaked) / smiley.pi.size(), 0.8);

  Rng rng = make_rng(4);
  peaked = 0;
  for (int t = 0; t < 5000; ++t) {
    const auto pi = sample_symmetric_dirichlet(3, 0.1 / 3.0, rng);
    peaked += *std::max_element(pi.begin(), pi.end()) >= 0.9;
  }
  EXPECT_GE(peaked / 5000.0, 0.8);
}

}  // namespace
}  // namespace bcm
