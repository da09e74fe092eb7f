#include "bcm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "bcm/error.hpp"
#include "bcm/explain.hpp"
#include "bcm/random.hpp"

namespace bcm {

namespace {
constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

const LabelSet& require_labels(const Dataset& data, const char* what) {
  if (!data.has_labels()) throw EvalError(std::string(what) + " needs labelled observations");
  return *data.labels();
}
}  // namespace

std::vector<std::size_t> dominant_clusters(const CountTables& counts) {
  std::vector<std::size_t> out(counts.num_observations(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < counts.num_clusters(); ++s)
      if (counts.observation_count(s, i) > counts.observation_count(best, i)) best = s;
    out[i] = best;
  }
  return out;
}

double unsupervised_accuracy(const Posterior& post, const ModelState& state, const CountTables& counts) {
  const auto& truth = require_labels(post.data(), "unsupervised accuracy");
  const auto& proto_labels = require_labels(post.pool(), "unsupervised accuracy (prototype pool)");
  const auto dominant = dominant_clusters(counts);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < dominant.size(); ++i) {
    const auto& predicted = proto_labels.names[proto_labels.ids[state.prototype(dominant[i])]];
    correct += (predicted == truth.names[truth.ids[i]]);
  }
  return static_cast<double>(correct) / static_cast<double>(dominant.size());
}

// Hungarian algorithm with potentials on a square cost matrix.
std::vector<std::size_t> max_weight_matching(const std::vector<std::vector<double>>& weights) {
  const std::size_t rows = weights.size();
  const std::size_t cols = rows == 0 ? 0 : weights[0].size();
  if (rows == 0 || cols == 0) return std::vector<std::size_t>(rows, npos);
  const std::size_t n = std::max(rows, cols);
  double top = 0.0;
  for (const auto& r : weights) top = std::max(top, *std::max_element(r.begin(), r.end()));
  auto cost = [&](std::size_t r, std::size_t c) {
    return (r < rows && c < cols) ? top - weights[r][c] : top;
  };

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based indexing; column 0 is a virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    match_col[0] = r;
    std::size_t c0 = 0;
    std::vector<double> min_v(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[c0] = true;
      const std::size_t r0 = match_col[c0];
      double delta = inf;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < min_v[c]) {
          min_v[c] = cur;
          way[c] = c0;
        }
        if (min_v[c] < delta) {
          delta = min_v[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match_col[c]] += delta;
          v[c] -= delta;
        } else {
          min_v[c] -= delta;
        }
      }
      c0 = c1;
    } while (match_col[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      match_col[c0] = match_col[c1];
      c0 = c1;
    } while (c0 != 0);
  }

  std::vector<std::size_t> assignment(rows, npos);
  for (std::size_t c = 1; c <= n; ++c) {
    const std::size_t r = match_col[c];
    if (r >= 1 && r <= rows && c <= cols) assignment[r - 1] = c - 1;
  }
  return assignment;
}

double best_permutation_accuracy(std::span<const std::size_t> truth, std::span<const std::size_t> predicted) {
  if (truth.size() != predicted.size() || truth.empty())
    throw EvalError("best-permutation accuracy needs equal-length, non-empty label vectors");
  const std::size_t classes = *std::max_element(truth.begin(), truth.end()) + 1;
  const std::size_t clusters = *std::max_element(predicted.begin(), predicted.end()) + 1;
  std::vector<std::vector<double>> overlap(clusters, std::vector<double>(classes, 0.0));
  for (std::size_t i = 0; i < truth.size(); ++i) overlap[predicted[i]][truth[i]] += 1.0;
  const auto match = max_weight_matching(overlap);
  double correct = 0.0;
  for (std::size_t k = 0; k < clusters; ++k)
    if (match[k] != npos) correct += overlap[k][match[k]];
  return correct / static_cast<double>(truth.size());
}

LinearClassifier::LinearClassifier(std::size_t classes, std::size_t dims)
    : classes_(classes), dims_(dims), w_(classes * (dims + 1), 0.0) {}

double LinearClassifier::score(std::size_t k, std::span<const double> x) const {
  const auto w = weights(k);
  double acc = w[dims_];
  for (std::size_t d = 0; d < dims_; ++d) acc += w[d] * x[d];
  return acc;
}

std::size_t LinearClassifier::predict(std::span<const double> x) const {
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < classes_; ++k) {
    const double s = score(k, x);
    if (s > best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

namespace {

double dot_with_bias(std::span<const double> w, std::span<const double> x) {
  double acc = w[x.size()];
  for (std::size_t d = 0; d < x.size(); ++d) acc += w[d] * x[d];
  return acc;
}

double binary_objective(std::span<const double> w, const std::vector<std::vector<double>>& features,
                        std::span<const std::size_t> labels, std::size_t k, double reg) {
  double norm = 0.0;
  for (double v : w) norm += v * v;
  double hinge = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double y = labels[i] == k ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - y * dot_with_bias(w, features[i]));
  }
  return 0.5 * reg * norm + hinge / static_cast<double>(features.size());
}

}  // namespace

LinearClassifier train_linear_svm(const std::vector<std::vector<double>>& features,
                                  std::span<const std::size_t> labels, std::size_t classes,
                                  const SvmOptions& options, std::vector<double>* epoch_objective) {
  if (features.empty() || features.size() != labels.size()) throw EvalError("classifier needs one label per row");
  if (!(options.regularization > 0.0) || options.epochs == 0) throw ConfigError("invalid SVM options");
  const std::size_t dims = features[0].size();
  const std::size_t n = features.size();
  const double reg = options.regularization;
  const double radius = 1.0 / std::sqrt(reg);
  LinearClassifier model(classes, dims);
  if (epoch_objective) epoch_objective->assign(options.epochs, 0.0);

  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < classes; ++k) {
    Rng rng = make_rng(options.seed, k);
    std::vector<double> w(dims + 1, 0.0);
    auto avg = model.weights(k);
    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (auto i : order) {
        ++t;
        const double eta = 1.0 / (reg * static_cast<double>(t));
        const double y = labels[i] == k ? 1.0 : -1.0;
        const double margin = y * dot_with_bias(w, features[i]);
        const double shrink = 1.0 - eta * reg;
        for (double& v : w) v *= shrink;
        if (margin < 1.0) {
          for (std::size_t d = 0; d < dims; ++d) w[d] += eta * y * features[i][d];
          w[dims] += eta * y;
        }
        double norm = 0.0;
        for (double v : w) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > radius)
          for (double& v : w) v *= radius / norm;
        const double mix = 1.0 / static_cast<double>(t);
        for (std::size_t d = 0; d <= dims; ++d) avg[d] += mix * (w[d] - avg[d]);
      }
      if (epoch_objective) (*epoch_objective)[epoch] += binary_objective(avg, features, labels, k, reg);
    }
  }
  return model;
}

double classifier_accuracy(const LinearClassifier& model, const std::vector<std::vector<double>>& features,
                           std::span<const std::size_t> labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) correct += model.predict(features[i]) == labels[i];
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

std::vector<std::size_t> stratified_folds(std::span<const std::size_t> labels, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw EvalError("cross-validation needs at least 2 folds");
  if (labels.size() < folds) throw EvalError("fewer observations than folds");
  const std::size_t classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng = make_rng(seed, 0x5f01d);
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t next = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) fold[i] = next++ % folds;
  }
  return fold;
}

PiClassifier train_pi_classifier(const std::vector<std::vector<double>>& pi, std::span<const std::size_t> labels,
                                 std::size_t folds, std::uint64_t seed, const SvmOptions& options) {
  if (pi.size() != labels.size() || pi.empty()) throw EvalError("one label per pi row is required");
  if (folds < 2) throw EvalError("cross-validation needs at least 2 folds");
  const std::set<std::size_t> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw EvalError("classifier needs at least two classes");
  const std::size_t classes = *distinct.rbegin() + 1;

  SvmOptions opts = options;
  opts.seed = seed;
  PiClassifier out;
  const auto fold = stratified_folds(labels, folds, seed);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::vector<double>> train_x, test_x;
    std::vector<std::size_t> train_y, test_y;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      if (fold[i] == f) {
        test_x.push_back(pi[i]);
        test_y.push_back(labels[i]);
      } else {
        train_x.push_back(pi[i]);
        train_y.push_back(labels[i]);
      }
    }
    const auto model = train_linear_svm(train_x, train_y, classes, opts);
    out.cv.fold_accuracy.push_back(classifier_accuracy(model, test_x, test_y));
  }
  const double k = static_cast<double>(folds);
  out.cv.mean = std::accumulate(out.cv.fold_accuracy.begin(), out.cv.fold_accuracy.end(), 0.0) / k;
  double ss = 0.0;
  for (double a : out.cv.fold_accuracy) ss += (a - out.cv.mean) * (a - out.cv.mean);
  out.cv.stddev = std::sqrt(ss / (k - 1.0));

  out.model = train_linear_svm(pi, labels, classes, opts);
  out.train_accuracy = classifier_accuracy(out.model, pi, labels);
  return out;
}

EvalReport evaluate(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t folds,
                    std::uint64_t seed) {
  const auto& truth = require_labels(post.data(), "evaluation");
  EvalReport report;
  report.class_names = truth.names;
  report.unsupervised_accuracy = unsupervised_accuracy(post, state, counts);

  const auto dominant = dominant_clusters(counts);
  report.best_permutation_accuracy = best_permutation_accuracy(truth.ids, dominant);

  // Predicted class = prototype label mapped into the data's class names.
  const auto& proto_labels = *post.pool().labels();
  const std::size_t k = truth.num_classes();
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < dominant.size(); ++i) {
    const auto& name = proto_labels.names[proto_labels.ids[state.prototype(dominant[i])]];
    const auto it = std::find(truth.names.begin(), truth.names.end(), name);
    if (it == truth.names.end()) continue;
    report.confusion[truth.ids[i]][static_cast<std::size_t>(it - truth.names.begin())] += 1;
  }

  for (std::size_t s = 0; s < post.num_clusters(); ++s) {
    std::vector<std::size_t> tally(k, 0);
    std::size_t members = 0;
    for (std::size_t i = 0; i < dominant.size(); ++i) {
      if (dominant[i] != s) continue;
      ++tally[truth.ids[i]];
      ++members;
    }
    if (members == 0)
      report.purity.emplace_back(std::nullopt);
    else
      report.purity.emplace_back(static_cast<double>(*std::max_element(tally.begin(), tally.end())) /
                                 static_cast<double>(members));
  }

  const std::set<std::size_t> distinct(truth.ids.begin(), truth.ids.end());
  if (distinct.size() < 2) {
    report.warnings.push_back("single class present; classifier accuracy not computed");
    return report;
  }
  const auto pi = estimate_pi(post.hyper(), counts, post.num_features());
  const auto clf = train_pi_classifier(pi, truth.ids, folds, seed);
  report.classifier_mean = clf.cv.mean;
  report.classifier_std = clf.cv.stddev;
  report.classifier_train_accuracy = clf.train_accuracy;
  if (clf.train_accuracy < clf.cv.mean - 0.05)
    report.warnings.push_back("training accuracy is more than 0.05 below cross-validated accuracy");
  return report;
}

std::vector<SweepRow> sensitivity_sweep(const Dataset& data, const Hyperparams& base, const SweepGrid& grid,
                                        const ChainConfig& chain, std::size_t folds) {
  const std::vector<double> qs = grid.q.empty() ? std::vector<double>{base.q} : grid.q;
  const std::vector<double> lambdas = grid.lambda.empty() ? std::vector<double>{base.lambda} : grid.lambda;
  const std::vector<double> cs = grid.c.empty() ? std::vector<double>{base.c} : grid.c;
  std::vector<SweepRow> rows;
  for (double q : qs) {
    for (double lambda : lambdas) {
      for (double c : cs) {
        Hyperparams h = base;
        h.q = q;
        h.lambda = lambda;
        h.c = c;
        const Posterior post(data, h);
        const auto result = run_chain(post, chain);
        SweepRow row;
        row.hyper = h;
        row.log_score = result.log_score;
        if (data.has_labels()) row.report = evaluate(post, result.state, result.counts, folds, chain.seed);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "q,lambda,c,log_score,unsupervised_accuracy,best_permutation_accuracy,classifier_mean,classifier_std\n";
  for (const auto& r : rows) {
    out << r.hyper.q << ',' << r.hyper.lambda << ',' << r.hyper.c << ',' << r.log_score << ',';
    if (r.report)
      out << r.report->unsupervised_accuracy << ',' << r.report->best_permutation_accuracy << ','
          << r.report->classifier_mean << ',' << r.report->classifier_std;
    else
      out << ",,,";
    out << '\n';
  }
  return out.str();
}

}  // namespace bcm
