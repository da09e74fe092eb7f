#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcm/dataset.hpp"
#include "bcm/hyperparams.hpp"
#include "bcm/state.hpp"

namespace bcm {

/// Dirichlet pseudo-counts for one (cluster, feature):
///   g(v) = lambda * (1 + c * 1[omega && similar(prototype_value, v)])
/// Exact similarity matches equal outcomes; thresholded similarity matches
/// outcomes whose numeric labels satisfy (p - v)^2 <= epsilon and throws
/// ConfigError on a feature with non-numeric labels.
std::vector<double> g_vector(const FeatureSpace& features, std::size_t j, Outcome prototype_value,
                             bool omega, const Hyperparams& hyper);

/// g vectors for every (feature, prototype value, omega) combination,
/// precomputed once per hyperparameter setting.
class PriorTable {
 public:
  PriorTable() = default;
  PriorTable(const FeatureSpace& features, const Hyperparams& hyper);

  bool similar(std::size_t j, Outcome prototype_value, Outcome v) const {
    return match_[match_offset_[j] + prototype_value * cardinality_[j] + v] != 0;
  }
  double g(std::size_t j, Outcome prototype_value, bool omega, Outcome v) const {
    return omega && similar(j, prototype_value, v) ? boosted_ : lambda_;
  }
  double g_total(std::size_t j, Outcome prototype_value, bool omega) const {
    return omega ? total_on_[total_offset_[j] + prototype_value] : lambda_ * cardinality_[j];
  }
  void fill(std::size_t j, Outcome prototype_value, bool omega, std::span<double> out) const;

  double lambda() const { return lambda_; }
  double boosted() const { return boosted_; }

 private:
  double lambda_ = 1.0;
  double boosted_ = 1.0;
  std::vector<std::size_t> cardinality_;
  std::vector<std::size_t> match_offset_;
  std::vector<std::uint8_t> match_;
  std::vector<std::size_t> total_offset_;
  std::vector<double> total_on_;
};

/// The target of inference: observed data, the pool prototypes are drawn
/// from (the data itself in an ordinary fit) and the hyperparameters.
/// Holds references; both datasets must outlive it.
class Posterior {
 public:
  Posterior(const Dataset& data, const Hyperparams& hyper);
  Posterior(const Dataset& data, const Dataset& pool, const Hyperparams& hyper);
  Posterior(Dataset&&, const Hyperparams&) = delete;
  Posterior(const Dataset&, Dataset&&, const Hyperparams&) = delete;

  const Dataset& data() const { return *data_; }
  const Dataset& pool() const { return *pool_; }
  const Hyperparams& hyper() const { return hyper_; }
  const PriorTable& prior() const { return prior_; }

  std::size_t num_clusters() const { return hyper_.clusters; }
  std::size_t num_observations() const { return data_->num_observations(); }
  std::size_t num_features() const { return data_->num_features(); }
  std::size_t pool_size() const { return pool_->num_observations(); }

  Outcome prototype_value(const ModelState& state, std::size_t s, std::size_t j) const {
    return pool_->at(state.prototype(s), j);
  }

  /// Throws StructuralError if the state does not fit this posterior.
  void check(const ModelState& state) const;

 private:
  const Dataset* data_;
  const Dataset* pool_;
  Hyperparams hyper_;
  PriorTable prior_;
};

}  // namespace bcm
