#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bcm/dataset.hpp"

namespace bcm {

/// Latent variables of the collapsed sampler: cell assignments z, prototype
/// rows p and subspace indicators omega.
class ModelState {
 public:
  ModelState() = default;
  ModelState(std::size_t clusters, std::size_t observations, std::size_t features);

  std::size_t num_clusters() const { return clusters_; }
  std::size_t num_observations() const { return observations_; }
  std::size_t num_features() const { return features_; }

  std::uint32_t assignment(std::size_t i, std::size_t j) const { return z_[i * features_ + j]; }
  void set_assignment(std::size_t i, std::size_t j, std::uint32_t s) { z_[i * features_ + j] = s; }
  std::span<const std::uint32_t> assignments() const { return z_; }

  /// Row of the prototype pool that prototypes cluster s.
  std::size_t prototype(std::size_t s) const { return prototypes_[s]; }
  void set_prototype(std::size_t s, std::size_t row) { prototypes_[s] = row; }
  std::span<const std::size_t> prototypes() const { return prototypes_; }

  bool in_subspace(std::size_t s, std::size_t j) const { return omega_[s * features_ + j] != 0; }
  void set_subspace(std::size_t s, std::size_t j, bool on) { omega_[s * features_ + j] = on ? 1 : 0; }
  std::span<const std::uint8_t> subspace(std::size_t s) const {
    return {omega_.data() + s * features_, features_};
  }
  std::span<const std::uint8_t> omega() const { return omega_; }
  double omega_density() const;

  /// Throws StructuralError unless shapes match (observations x features),
  /// assignments are < S, prototypes are < pool_rows and omega is 0/1.
  void validate(std::size_t observations, std::size_t features, std::size_t pool_rows) const;

  /// Relabels clusters: new cluster k is old cluster perm[k].
  ModelState permuted(std::span<const std::size_t> perm) const;

  bool operator==(const ModelState&) const = default;

 private:
  std::size_t clusters_ = 0;
  std::size_t observations_ = 0;
  std::size_t features_ = 0;
  std::vector<std::uint32_t> z_;
  std::vector<std::size_t> prototypes_;
  std::vector<std::uint8_t> omega_;
};

/// Sufficient statistics of (z, x):
///   njv[s][j][v] = #{i : z_ij = s, x_ij = v}
///   nj[s][j]     = sum_v njv[s][j][v]
///   ni[s][i]     = #{j : z_ij = s}
class CountTables {
 public:
  CountTables() = default;
  CountTables(std::size_t clusters, std::size_t observations, const FeatureSpace& features);

  /// Recount from scratch. Throws StructuralError on a dimension mismatch.
  static CountTables rebuild(const Dataset& data, const ModelState& state);

  void add(std::size_t s, std::size_t i, std::size_t j, Outcome v);
  void remove(std::size_t s, std::size_t i, std::size_t j, Outcome v);

  std::size_t num_clusters() const { return clusters_; }
  std::size_t num_observations() const { return observations_; }
  std::size_t num_features() const { return offsets_.size(); }

  std::span<const std::uint32_t> outcome_counts(std::size_t s, std::size_t j) const {
    return {njv_.data() + s * total_outcomes_ + offsets_[j], cardinality_[j]};
  }
  std::uint32_t outcome_count(std::size_t s, std::size_t j, Outcome v) const {
    return njv_[s * total_outcomes_ + offsets_[j] + v];
  }
  std::uint32_t feature_total(std::size_t s, std::size_t j) const { return nj_[s * offsets_.size() + j]; }
  std::uint32_t observation_count(std::size_t s, std::size_t i) const { return ni_[s * observations_ + i]; }
  /// Number of cells assigned to cluster s.
  std::uint64_t cluster_total(std::size_t s) const;

  bool operator==(const CountTables&) const = default;

 private:
  std::size_t clusters_ = 0;
  std::size_t observations_ = 0;
  std::size_t total_outcomes_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> cardinality_;
  std::vector<std::uint32_t> njv_;
  std::vector<std::uint32_t> nj_;
  std::vector<std::uint32_t> ni_;
};

}  // namespace bcm
