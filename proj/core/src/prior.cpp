#include "bcm/prior.hpp"

#include "bcm/error.hpp"

namespace bcm {

namespace {

std::vector<std::uint8_t> similarity_matrix(const FeatureSpace& features, std::size_t j, const Similarity& sim) {
  const std::size_t v_count = features.cardinality(j);
  std::vector<std::uint8_t> match(v_count * v_count, 0);
  if (sim.kind == Similarity::Kind::exact) {
    for (std::size_t v = 0; v < v_count; ++v) match[v * v_count + v] = 1;
    return match;
  }
  const auto values = features.numeric_values(j);
  if (!values)
    throw ConfigError("thresholded similarity needs numeric outcome labels; feature '" + features.name(j) +
                      "' is not numeric");
  for (std::size_t a = 0; a < v_count; ++a) {
    for (std::size_t b = 0; b < v_count; ++b) {
      const double d = (*values)[a] - (*values)[b];
      match[a * v_count + b] = d * d <= sim.epsilon ? 1 : 0;
    }
  }
  return match;
}

}  // namespace

std::vector<double> g_vector(const FeatureSpace& features, std::size_t j, Outcome prototype_value, bool omega,
                             const Hyperparams& hyper) {
  const std::size_t v_count = features.cardinality(j);
  if (prototype_value >= v_count) throw StructuralError("g_vector: prototype value outside the vocabulary");
  std::vector<double> g(v_count, hyper.lambda);
  if (!omega) return g;
  const auto match = similarity_matrix(features, j, hyper.similarity);
  for (std::size_t v = 0; v < v_count; ++v)
    if (match[prototype_value * v_count + v]) g[v] = hyper.lambda * (1.0 + hyper.c);
  return g;
}

PriorTable::PriorTable(const FeatureSpace& features, const Hyperparams& hyper)
    : lambda_(hyper.lambda), boosted_(hyper.lambda * (1.0 + hyper.c)) {
  for (std::size_t j = 0; j < features.size(); ++j) {
    const std::size_t v_count = features.cardinality(j);
    cardinality_.push_back(v_count);
    match_offset_.push_back(match_.size());
    total_offset_.push_back(total_on_.size());
    const auto match = similarity_matrix(features, j, hyper.similarity);
    match_.insert(match_.end(), match.begin(), match.end());
    for (std::size_t p = 0; p < v_count; ++p) {
      std::size_t matches = 0;
      for (std::size_t v = 0; v < v_count; ++v) matches += match[p * v_count + v];
      total_on_.push_back(hyper.lambda * (static_cast<double>(v_count) + hyper.c * static_cast<double>(matches)));
    }
  }
}

void PriorTable::fill(std::size_t j, Outcome prototype_value, bool omega, std::span<double> out) const {
  for (std::size_t v = 0; v < cardinality_[j]; ++v) out[v] = g(j, prototype_value, omega, static_cast<Outcome>(v));
}

Posterior::Posterior(const Dataset& data, const Hyperparams& hyper) : Posterior(data, data, hyper) {}

Posterior::Posterior(const Dataset& data, const Dataset& pool, const Hyperparams& hyper)
    : data_(&data), pool_(&pool), hyper_(hyper) {
  hyper_.validate();
  if (!(pool.features() == data.features()))
    throw ConfigError("prototype pool and data have different feature spaces");
  prior_ = PriorTable(data.features(), hyper_);
}

void Posterior::check(const ModelState& state) const {
  if (state.num_clusters() != hyper_.clusters) throw StructuralError("state cluster count differs from S");
  state.validate(num_observations(), num_features(), pool_size());
}

}  // namespace bcm
