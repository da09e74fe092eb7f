#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcm/gibbs.hpp"
#include "bcm/prior.hpp"
#include "bcm/state.hpp"

namespace bcm {

/// argmax_s ni[s][i] per observation, ties to the lowest s.
std::vector<std::size_t> dominant_clusters(const CountTables& counts);

/// Fraction of observations whose dominant cluster's prototype carries the
/// observation's label. Throws EvalError when the data has no labels.
double unsupervised_accuracy(const Posterior& post, const ModelState& state, const CountTables& counts);

/// Maximum-weight assignment of rows to columns of a (possibly rectangular)
/// matrix. Returns, for each row, its column or npos when unmatched.
std::vector<std::size_t> max_weight_matching(const std::vector<std::vector<double>>& weights);

/// Accuracy after optimally matching predicted clusters to true classes.
double best_permutation_accuracy(std::span<const std::size_t> truth, std::span<const std::size_t> predicted);

/// One-vs-rest linear max-margin classifier (Pegasos: hinge loss, L2).
struct SvmOptions {
  double regularization = 1e-3;
  std::size_t epochs = 60;
  std::uint64_t seed = 0;
};

class LinearClassifier {
 public:
  LinearClassifier() = default;
  LinearClassifier(std::size_t classes, std::size_t dims);

  std::size_t num_classes() const { return classes_; }
  std::size_t num_dims() const { return dims_; }
  double score(std::size_t k, std::span<const double> x) const;
  std::size_t predict(std::span<const double> x) const;
  std::span<double> weights(std::size_t k) { return {w_.data() + k * (dims_ + 1), dims_ + 1}; }
  std::span<const double> weights(std::size_t k) const { return {w_.data() + k * (dims_ + 1), dims_ + 1}; }

 private:
  std::size_t classes_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> w_;  // [k][dims + bias]
};

/// Trains on rows `features[i]` with class ids `labels[i]` < classes. When
/// `epoch_objective` is given it receives the regularized hinge objective of
/// the averaged iterate after each epoch, summed over classes.
LinearClassifier train_linear_svm(const std::vector<std::vector<double>>& features,
                                  std::span<const std::size_t> labels, std::size_t classes,
                                  const SvmOptions& options, std::vector<double>* epoch_objective = nullptr);

double classifier_accuracy(const LinearClassifier& model, const std::vector<std::vector<double>>& features,
                           std::span<const std::size_t> labels);

struct CrossValidation {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> fold_accuracy;
};

/// Stratified k-fold assignment, seeded.
std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels, std::size_t folds,
                                          std::uint64_t seed);

struct PiClassifier {
  LinearClassifier model;  // trained on all rows
  CrossValidation cv;
  double train_accuracy = 0.0;
};

/// Throws EvalError with fewer than two classes or folds < 2.
PiClassifier train_pi_classifier(const std::vector<std::vector<double>>& pi, std::span<const std::size_t> labels,
                                 std::size_t folds, std::uint64_t seed, const SvmOptions& options = {});

struct EvalReport {
  double unsupervised_accuracy = 0.0;
  double best_permutation_accuracy = 0.0;
  double classifier_mean = 0.0;
  double classifier_std = 0.0;
  double classifier_train_accuracy = 0.0;
  /// Share of the majority label among each cluster's dominant observations
  /// (nullopt for clusters dominating no observation).
  std::vector<std::optional<double>> purity;
  /// [true class][predicted class], prediction = prototype label.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<std::string> class_names;
  std::vector<std::string> warnings;
};

EvalReport evaluate(const Posterior& post, const ModelState& state, const CountTables& counts,
                    std::size_t folds, std::uint64_t seed);

struct SweepGrid {
  std::vector<double> q;
  std::vector<double> lambda;
  std::vector<double> c;
};

struct SweepRow {
  Hyperparams hyper;
  double log_score = 0.0;
  std::optional<EvalReport> report;  // nullopt when the data has no labels
};

/// One chain per grid point (Cartesian product of the grid), all with the
/// chain seed of `chain`.
std::vector<SweepRow> sensitivity_sweep(const Dataset& data, const Hyperparams& base, const SweepGrid& grid,
                                        const ChainConfig& chain, std::size_t folds);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace bcm
