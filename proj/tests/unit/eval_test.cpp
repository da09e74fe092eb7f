#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "bcm/error.hpp"
#include "bcm/eval.hpp"
#include "bcm/generate.hpp"
#include "bcm/random.hpp"
#include "test_util.hpp"

namespace bcm {
namespace {

TEST(UnsupervisedAccuracy, PerfectAndWorstCases) {
  auto data = testing::make_dataset({2}, {{0}, {1}, {0}});
  data.set_labels(testing::make_labels({"a", "a", "a"}));
  const auto state = testing::make_state(2, {{0}, {0}, {0}}, {1, 2}, {{1}, {0}});
  const Posterior post(data, Hyperparams{2, 1.0, 0.5, 1.0, 50.0, {}});
  EXPECT_DOUBLE_EQ(unsupervised_accuracy(post, state, CountTables::rebuild(data, state)), 1.0);

  auto worst = testing::make_dataset({2}, {{0}, {1}, {0}, {1}});
  worst.set_labels(testing::make_labels({"a", "b", "a", "b"}));
  // Cluster 0 holds the "a" rows but its prototype is a "b" row, and vice versa.
  const auto swapped = testing::make_state(2, {{0}, {1}, {0}, {1}}, {1, 0}, {{0}, {0}});
  const Posterior post2(worst, Hyperparams{2, 1.0, 0.5, 1.0, 50.0, {}});
  EXPECT_DOUBLE_EQ(unsupervised_accuracy(post2, swapped, CountTables::rebuild(worst, swapped)), 0.0);
}

TEST(UnsupervisedAccuracy, RequiresLabels) {
  const auto data = testing::make_dataset({2}, {{0}, {1}});
  const auto state = testing::make_state(2, {{0}, {1}}, {0, 1}, {{0}, {0}});
  const Posterior post(data, Hyperparams{2, 1.0, 0.5, 1.0, 50.0, {}});
  EXPECT_THROW(unsupervised_accuracy(post, state, CountTables::rebuild(data, state)), EvalError);
}

TEST(UnsupervisedAccuracy, InvariantUnderRelabelling) {
  const auto smiley = make_smiley_dataset(3, {90});
  const Posterior post(smiley.data, SmileyOptions{}.hyper);
  Rng rng = make_rng(5);
  auto state = random_state(post, rng);
  // Four of six features share a cluster, so no observation has a tie.
  for (std::size_t i = 0; i < state.num_observations(); ++i) {
    const auto k = static_cast<std::uint32_t>(uniform_index(3, rng));
    for (std::size_t j = 0; j < 4; ++j) state.set_assignment(i, j, k);
  }
  const double base = unsupervised_accuracy(post, state, CountTables::rebuild(smiley.data, state));
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto p = state.permuted(perm);
  EXPECT_DOUBLE_EQ(unsupervised_accuracy(post, p, CountTables::rebuild(smiley.data, p)), base);
}

TEST(DominantClusters, TiesGoToLowestCluster) {
  const auto data = testing::make_dataset({2, 2}, {{0, 1}});
  const auto state = testing::make_state(2, {{1, 0}}, {0, 0}, {{0, 0}, {0, 0}});
  EXPECT_EQ(dominant_clusters(CountTables::rebuild(data, state)), std::vector<std::size_t>{0});
}

double brute_force_matching(const std::vector<std::vector<double>>& w) {
  const std::size_t rows = w.size(), cols = w[0].size();
  std::vector<std::size_t> perm(std::max(rows, cols));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      if (perm[r] < cols) total += w[r][perm[r]];
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(Matching, AgreesWithBruteForce) {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 1 + uniform_index(5, rng), cols = 1 + uniform_index(5, rng);
    std::vector<std::vector<double>> w(rows, std::vector<double>(cols));
    for (auto& r : w)
      for (auto& v : r) v = std::floor(10.0 * uniform_open(rng)) - 3.0;
    const auto m = max_weight_matching(w);
    ASSERT_EQ(m.size(), rows);
    double total = 0.0;
    std::vector<int> used(cols, 0);
    std::size_t matched = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (m[r] == static_cast<std::size_t>(-1)) continue;
      ASSERT_LT(m[r], cols);
      EXPECT_EQ(used[m[r]]++, 0);
      total += w[r][m[r]];
      ++matched;
    }
    EXPECT_EQ(matched, std::min(rows, cols));
    EXPECT_NEAR(total, brute_force_matching(w), 1e-9);
  }
}

TEST(BestPermutation, RecoversRelabelledClusters) {
  const std::vector<std::size_t> truth{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(best_permutation_accuracy(truth, std::vector<std::size_t>{2, 2, 0, 0, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(best_permutation_accuracy(truth, std::vector<std::size_t>{0, 0, 0, 0, 0, 0}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(best_permutation_accuracy(truth, std::vector<std::size_t>{1, 1, 0, 2, 2, 2}), 5.0 / 6.0);
}

std::vector<std::vector<double>> two_blobs(std::size_t n, Rng& rng, std::vector<std::size_t>& labels) {
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i % 2;
    const double a = 0.7 + 0.25 * uniform_open(rng);
    x.push_back(k == 0 ? std::vector<double>{a, 1.0 - a} : std::vector<double>{1.0 - a, a});
    labels.push_back(k);
  }
  return x;
}

TEST(PiClassifier, SeparableDataIsPerfect) {
  Rng rng = make_rng(2);
  std::vector<std::size_t> labels;
  const auto x = two_blobs(100, rng, labels);
  const auto fit = train_pi_classifier(x, labels, 5, 3);
  EXPECT_DOUBLE_EQ(fit.cv.mean, 1.0);
  EXPECT_DOUBLE_EQ(fit.train_accuracy, 1.0);
  EXPECT_EQ(fit.cv.fold_accuracy.size(), 5u);
}

TEST(PiClassifier, ShuffledLabelsAtChance) {
  Rng rng = make_rng(8);
  const std::size_t classes = 4, n = 400;
  std::vector<std::vector<double>> x;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(sample_symmetric_dirichlet(classes, 0.3, rng));
    labels.push_back(i % classes);
  }
  std::shuffle(labels.begin(), labels.end(), rng);
  const auto fit = train_pi_classifier(x, labels, 5, 4);
  EXPECT_NEAR(fit.cv.mean, 1.0 / classes, 0.1);
}

TEST(PiClassifier, Deterministic) {
  Rng rng = make_rng(3);
  std::vector<std::size_t> labels;
  const auto x = two_blobs(60, rng, labels);
  EXPECT_EQ(train_pi_classifier(x, labels, 3, 9).cv.fold_accuracy,
            train_pi_classifier(x, labels, 3, 9).cv.fold_accuracy);
}

TEST(PiClassifier, RejectsDegenerateInput) {
  const std::vector<std::vector<double>> x{{1.0}, {0.5}, {0.2}};
  const std::vector<std::size_t> one_class{0, 0, 0};
  EXPECT_THROW(train_pi_classifier(x, one_class, 2, 1), EvalError);
  const std::vector<std::size_t> two{0, 1, 0};
  EXPECT_THROW(train_pi_classifier(x, two, 1, 1), EvalError);
}

TEST(LinearSvm, AveragedObjectiveNonIncreasing) {
  Rng rng = make_rng(6);
  std::vector<std::vector<double>> x;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < 300; ++i) {
    const std::size_t k = i % 3;
    auto v = sample_symmetric_dirichlet(3, 1.0, rng);
    v[k] += 0.5;
    x.push_back(v);
    labels.push_back(k);
  }
  std::vector<double> objective;
  SvmOptions options;
  options.epochs = 40;
  train_linear_svm(x, labels, 3, options, &objective);
  ASSERT_EQ(objective.size(), 40u);
  // Stochastic: allow small upticks between epochs, require an overall decline.
  for (std::size_t e = 1; e < objective.size(); ++e) EXPECT_LE(objective[e], objective[e - 1] * 1.02 + 1e-9);
  EXPECT_LT(objective.back(), objective.front());
}

TEST(StratifiedFolds, BalancedPerClass) {
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < 50; ++i) labels.push_back(i < 20 ? 0 : 1);
  const auto folds = stratified_folds(labels, 5, 1);
  for (std::size_t f = 0; f < 5; ++f) {
    std::size_t a = 0, b = 0;
    for (std::size_t i = 0; i < 50; ++i)
      if (folds[i] == f) (labels[i] == 0 ? a : b)++;
    EXPECT_EQ(a, 4u);
    EXPECT_EQ(b, 6u);
  }
}

TEST(Evaluate, ReportIsConsistent) {
  const auto smiley = make_smiley_dataset(4, {120});
  const Posterior post(smiley.data, SmileyOptions{}.hyper);
  const auto counts = CountTables::rebuild(smiley.data, smiley.truth);
  const auto report = evaluate(post, smiley.truth, counts, 5, 1);
  EXPECT_DOUBLE_EQ(report.unsupervised_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(report.best_permutation_accuracy, 1.0);
  EXPECT_GE(report.classifier_mean, 0.95);
  ASSERT_EQ(report.confusion.size(), smiley.data.labels()->num_classes());
  for (std::size_t k = 0; k < report.confusion.size(); ++k) {
    const auto row = std::accumulate(report.confusion[k].begin(), report.confusion[k].end(), std::size_t{0});
    EXPECT_EQ(row, static_cast<std::size_t>(std::count(smiley.data.labels()->ids.begin(),
                                                       smiley.data.labels()->ids.end(), k)));
  }
  for (const auto& p : report.purity)
    if (p) EXPECT_DOUBLE_EQ(*p, 1.0);
}

TEST(Sweep, SinglePointEqualsPlainFit) {
  const auto smiley = make_smiley_dataset(5, {90});
  const auto hyper = SmileyOptions{}.hyper;
  ChainConfig chain;
  chain.iterations = 40;
  chain.seed = 4;
  const auto rows = sensitivity_sweep(smiley.data, hyper, SweepGrid{{hyper.q}, {hyper.lambda}, {hyper.c}}, chain, 5);
  ASSERT_EQ(rows.size(), 1u);
  const Posterior post(smiley.data, hyper);
  const auto fit = run_chain(post, chain);
  EXPECT_DOUBLE_EQ(rows[0].log_score, fit.log_score);
  ASSERT_TRUE(rows[0].report);
  EXPECT_DOUBLE_EQ(rows[0].report->unsupervised_accuracy, unsupervised_accuracy(post, fit.state, fit.counts));
  const auto csv = sweep_to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "q,lambda,c,log_score,unsupervised_accuracy,best_permutation_accuracy,classifier_mean,classifier_std");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Sweep, RobustAcrossQ) {
  const auto smiley = make_smiley_dataset(2);
  ChainConfig chain;
  chain.iterations = 300;
  chain.log_every = 300;
  chain.seed = 1;
  const auto rows = sensitivity_sweep(smiley.data, SmileyOptions{}.hyper, SweepGrid{{0.4, 0.6, 0.8}, {}, {}}, chain, 5);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.report);
    // Below the ~0.93 ceiling of the planted labels; see RecoversSmileyClusters.
    EXPECT_GE(r.report->best_permutation_accuracy, 0.85) << "q=" << r.hyper.q;
  }
}

TEST(Sweep, CopyStrengthGridStaysFinite) {
  const auto smiley = make_smiley_dataset(6, {90});
  ChainConfig chain;
  chain.iterations = 50;
  const auto rows = sensitivity_sweep(smiley.data, SmileyOptions{}.hyper, SweepGrid{{}, {}, {10.0, 50.0, 100.0}}, chain, 5);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_TRUE(std::isfinite(r.log_score));
}

}  // namespace
}  // namespace bcm
