#include "bcm/generate.hpp"

#include <algorithm>
#include <cstdio>

#include "bcm/error.hpp"
#include "bcm/prior.hpp"

namespace bcm {

namespace {

std::vector<double> draw_phi(const PriorTable& prior, std::size_t j, std::size_t v_count, Outcome pv, bool on,
                             Rng& rng) {
  std::vector<double> g(v_count);
  prior.fill(j, pv, on, g);
  return sample_dirichlet(g, rng);
}

}  // namespace

GenerativeDraw sample_prior(const FeatureSpace& features, std::size_t observations, const Hyperparams& hyper,
                            const Dataset& pool, std::uint64_t seed) {
  hyper.validate();
  if (pool.num_observations() == 0) throw ConfigError("prototype pool is empty");
  if (!(pool.features() == features)) throw ConfigError("prototype pool has a different feature space");
  if (observations == 0) throw ConfigError("observation count must be >= 1");

  const std::size_t s_count = hyper.clusters;
  const std::size_t p_count = features.size();
  const PriorTable prior(features, hyper);
  Rng rng = make_rng(seed, 0);

  GenerativeDraw draw;
  draw.latent = ModelState(s_count, observations, p_count);
  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t j = 0; j < p_count; ++j) draw.latent.set_subspace(s, j, bernoulli(hyper.q, rng));
  for (std::size_t s = 0; s < s_count; ++s) draw.latent.set_prototype(s, uniform_index(pool.num_observations(), rng));

  draw.phi.resize(s_count);
  for (std::size_t s = 0; s < s_count; ++s) {
    for (std::size_t j = 0; j < p_count; ++j) {
      const Outcome pv = pool.at(draw.latent.prototype(s), j);
      draw.phi[s].push_back(draw_phi(prior, j, features.cardinality(j), pv, draw.latent.in_subspace(s, j), rng));
    }
  }

  std::vector<Outcome> cells(observations * p_count);
  draw.pi.reserve(observations);
  for (std::size_t i = 0; i < observations; ++i) {
    draw.pi.push_back(sample_symmetric_dirichlet(s_count, hyper.alpha_per_cluster(), rng));
    for (std::size_t j = 0; j < p_count; ++j) {
      const auto s = static_cast<std::uint32_t>(sample_categorical(draw.pi[i], rng));
      draw.latent.set_assignment(i, j, s);
      cells[i * p_count + j] = static_cast<Outcome>(sample_categorical(draw.phi[s][j], rng));
    }
  }
  draw.data = Dataset(features, observations, std::move(cells));
  return draw;
}

Dataset uniform_pool(const FeatureSpace& features, std::size_t rows, std::uint64_t seed) {
  if (rows == 0) throw ConfigError("pool size must be >= 1");
  Rng rng = make_rng(seed, 0x9001);
  std::vector<Outcome> cells(rows * features.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < features.size(); ++j)
      cells[i * features.size() + j] = static_cast<Outcome>(uniform_index(features.cardinality(j), rng));
  return Dataset(features, rows, std::move(cells));
}

void resample_data(Dataset& data, const ModelState& latent, const Dataset& pool, const Hyperparams& hyper, Rng& rng) {
  const auto& features = data.features();
  const PriorTable prior(features, hyper);
  std::vector<std::vector<std::vector<double>>> phi(latent.num_clusters());
  for (std::size_t s = 0; s < latent.num_clusters(); ++s)
    for (std::size_t j = 0; j < features.size(); ++j)
      phi[s].push_back(draw_phi(prior, j, features.cardinality(j), pool.at(latent.prototype(s), j),
                                latent.in_subspace(s, j), rng));
  for (std::size_t i = 0; i < data.num_observations(); ++i)
    for (std::size_t j = 0; j < features.size(); ++j)
      data.set(i, j, static_cast<Outcome>(sample_categorical(phi[latent.assignment(i, j)][j], rng)));
}

std::vector<std::vector<std::uint8_t>> smiley_subspaces() {
  // eye_type, eye_shape, eye_color, mouth_type, mouth_shape, mouth_color
  return {
      {0, 1, 1, 0, 0, 0},  // eye shape and color
      {1, 0, 1, 0, 0, 0},  // eye type and color
      {1, 0, 0, 1, 0, 0},  // eye type and mouth type
  };
}

SmileyData make_smiley_dataset(std::uint64_t seed, const SmileyOptions& options) {
  const Hyperparams& hyper = options.hyper;
  hyper.validate();
  if (hyper.clusters != 3) throw ConfigError("the smiley preset has exactly three clusters");
  if (options.observations < hyper.clusters) throw ConfigError("smiley preset needs at least S observations");
  if (!(options.unimportant_max_mass > 1.0 / 3.0)) throw ConfigError("unimportant_max_mass must exceed 1/3");

  FeatureSpace features;
  features.add_feature("eye_type", {"open", "closed", "wink"});
  features.add_feature("eye_shape", {"round", "square", "triangle"});
  features.add_feature("eye_color", {"green", "orange", "blue"});
  features.add_feature("mouth_type", {"smile", "frown", "flat"});
  features.add_feature("mouth_shape", {"wide", "narrow", "round"});
  features.add_feature("mouth_color", {"red", "pink", "purple"});

  const std::size_t s_count = 3;
  const std::size_t p_count = features.size();
  const std::size_t n = options.observations;
  const auto planted = smiley_subspaces();
  const PriorTable prior(features, hyper);
  Rng rng = make_rng(seed, 0);

  // Prototype s takes outcome s on every feature and is observation s.
  SmileyData out;
  out.truth = ModelState(s_count, n, p_count);
  std::vector<std::vector<std::vector<double>>> phi(s_count);
  for (std::size_t s = 0; s < s_count; ++s) {
    out.truth.set_prototype(s, s);
    for (std::size_t j = 0; j < p_count; ++j) {
      const bool on = planted[s][j] != 0;
      out.truth.set_subspace(s, j, on);
      auto draw = draw_phi(prior, j, 3, static_cast<Outcome>(s), on, rng);
      while (!on && *std::max_element(draw.begin(), draw.end()) > options.unimportant_max_mass)
        draw = draw_phi(prior, j, 3, static_cast<Outcome>(s), on, rng);
      phi[s].push_back(std::move(draw));
    }
  }

  std::vector<Outcome> cells(n * p_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < s_count) {
      std::vector<double> one_hot(s_count, 0.0);
      one_hot[i] = 1.0;
      out.pi.push_back(one_hot);
      for (std::size_t j = 0; j < p_count; ++j) {
        out.truth.set_assignment(i, j, static_cast<std::uint32_t>(i));
        cells[i * p_count + j] = static_cast<Outcome>(i);
      }
      continue;
    }
    out.pi.push_back(sample_symmetric_dirichlet(s_count, hyper.alpha_per_cluster(), rng));
    for (std::size_t j = 0; j < p_count; ++j) {
      const auto s = static_cast<std::uint32_t>(sample_categorical(out.pi[i], rng));
      out.truth.set_assignment(i, j, s);
      cells[i * p_count + j] = static_cast<Outcome>(sample_categorical(phi[s][j], rng));
    }
  }

  out.data = Dataset(features, n, std::move(cells));
  const auto counts = CountTables::rebuild(out.data, out.truth);
  LabelSet labels;
  labels.names = {"c0", "c1", "c2"};
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < s_count; ++s)
      if (counts.observation_count(s, i) > counts.observation_count(best, i)) best = s;
    labels.ids.push_back(best);
    char buf[32];
    std::snprintf(buf, sizeof buf, "face%03zu", i);
    ids.emplace_back(buf);
  }
  out.data.set_labels(std::move(labels));
  out.data.set_ids(std::move(ids));
  return out;
}

}  // namespace bcm
