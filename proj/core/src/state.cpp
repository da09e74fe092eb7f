#include "bcm/state.hpp"

#include <numeric>

#include "bcm/error.hpp"

namespace bcm {

ModelState::ModelState(std::size_t clusters, std::size_t observations, std::size_t features)
    : clusters_(clusters),
      observations_(observations),
      features_(features),
      z_(observations * features, 0),
      prototypes_(clusters, 0),
      omega_(clusters * features, 0) {}

double ModelState::omega_density() const {
  if (omega_.empty()) return 0.0;
  const auto on = std::accumulate(omega_.begin(), omega_.end(), std::size_t{0});
  return static_cast<double>(on) / static_cast<double>(omega_.size());
}

void ModelState::validate(std::size_t observations, std::size_t features, std::size_t pool_rows) const {
  if (observations_ != observations || features_ != features)
    throw StructuralError("state shape " + std::to_string(observations_) + "x" + std::to_string(features_) +
                          " does not match data " + std::to_string(observations) + "x" + std::to_string(features));
  if (clusters_ == 0) throw StructuralError("state has no clusters");
  for (auto s : z_)
    if (s >= clusters_) throw StructuralError("assignment outside [0, S)");
  for (auto p : prototypes_)
    if (p >= pool_rows) throw StructuralError("prototype is not a row of the pool");
  for (auto w : omega_)
    if (w > 1) throw StructuralError("omega entry is not 0 or 1");
}

ModelState ModelState::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != clusters_) throw StructuralError("permutation size differs from S");
  std::vector<std::uint32_t> inverse(clusters_);
  for (std::size_t k = 0; k < clusters_; ++k) inverse.at(perm[k]) = static_cast<std::uint32_t>(k);
  ModelState out(clusters_, observations_, features_);
  for (std::size_t c = 0; c < z_.size(); ++c) out.z_[c] = inverse[z_[c]];
  for (std::size_t k = 0; k < clusters_; ++k) {
    out.prototypes_[k] = prototypes_[perm[k]];
    for (std::size_t j = 0; j < features_; ++j) out.omega_[k * features_ + j] = omega_[perm[k] * features_ + j];
  }
  return out;
}

CountTables::CountTables(std::size_t clusters, std::size_t observations, const FeatureSpace& features)
    : clusters_(clusters), observations_(observations), total_outcomes_(features.total_outcomes()) {
  for (std::size_t j = 0; j < features.size(); ++j) {
    offsets_.push_back(features.offset(j));
    cardinality_.push_back(features.cardinality(j));
  }
  njv_.assign(clusters * total_outcomes_, 0);
  nj_.assign(clusters * features.size(), 0);
  ni_.assign(clusters * observations, 0);
}

CountTables CountTables::rebuild(const Dataset& data, const ModelState& state) {
  if (state.num_observations() != data.num_observations() || state.num_features() != data.num_features())
    throw StructuralError("rebuild_counts: state dimensions do not match the dataset");
  CountTables counts(state.num_clusters(), data.num_observations(), data.features());
  for (std::size_t i = 0; i < data.num_observations(); ++i) {
    for (std::size_t j = 0; j < data.num_features(); ++j) {
      const auto s = state.assignment(i, j);
      if (s >= state.num_clusters()) throw StructuralError("rebuild_counts: assignment outside [0, S)");
      counts.add(s, i, j, data.at(i, j));
    }
  }
  return counts;
}

void CountTables::add(std::size_t s, std::size_t i, std::size_t j, Outcome v) {
  ++njv_[s * total_outcomes_ + offsets_[j] + v];
  ++nj_[s * offsets_.size() + j];
  ++ni_[s * observations_ + i];
}

void CountTables::remove(std::size_t s, std::size_t i, std::size_t j, Outcome v) {
  --njv_[s * total_outcomes_ + offsets_[j] + v];
  --nj_[s * offsets_.size() + j];
  --ni_[s * observations_ + i];
}

std::uint64_t CountTables::cluster_total(std::size_t s) const {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < offsets_.size(); ++j) total += feature_total(s, j);
  return total;
}

}  // namespace bcm
