#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bcm/dataset.hpp"
#include "bcm/hyperparams.hpp"
#include "bcm/random.hpp"
#include "bcm/state.hpp"

namespace bcm {

/// One forward sample of the full generative process.
struct GenerativeDraw {
  Dataset data;
  /// z, p (rows of the prototype pool) and omega.
  ModelState latent;
  std::vector<std::vector<std::vector<double>>> phi;  // [s][j][v]
  std::vector<std::vector<double>> pi;                // [i][s]
};

/// Forward sampling with prototypes drawn uniformly from `pool`:
/// omega ~ Bernoulli(q), p_s ~ Uniform(pool), phi_sj ~ Dirichlet(g),
/// pi_i ~ Dirichlet(alpha / S), z_ij ~ pi_i, x_ij ~ phi_{z_ij, j}.
/// Deterministic in `seed`. Throws ConfigError on an empty pool or a pool
/// over a different feature space.
GenerativeDraw sample_prior(const FeatureSpace& features, std::size_t observations, const Hyperparams& hyper,
                            const Dataset& pool, std::uint64_t seed);

/// A pool of `rows` outcome tuples drawn uniformly, for self-contained
/// synthesis when no prototype pool exists yet.
Dataset uniform_pool(const FeatureSpace& features, std::size_t rows, std::uint64_t seed);

/// Regenerates x given (z, omega, p) with phi drawn fresh from its prior;
/// pi is irrelevant once z is fixed. Used for successive-conditional tests.
void resample_data(Dataset& data, const ModelState& latent, const Dataset& pool, const Hyperparams& hyper,
                   Rng& rng);

/// Planted smiley-face data: three clusters, each with exactly two
/// important features.
struct SmileyData {
  Dataset data;  // carries labels (dominant planted cluster) and ids
  ModelState truth;  // prototypes index rows of `data`
  std::vector<std::vector<double>> pi;
};

struct SmileyOptions {
  std::size_t observations = 240;
  Hyperparams hyper{3, 0.1, 0.5, 1.0, 50.0, {}};
  /// Unimportant features redraw phi until no outcome exceeds this mass, so
  /// the planted subspace is the only one the data supports.
  double unimportant_max_mass = 0.7;
};

/// Feature layout: eye type/shape/color and mouth type/shape/color, three
/// outcomes each. Deterministic in `seed`.
SmileyData make_smiley_dataset(std::uint64_t seed, const SmileyOptions& options = {});

/// Planted subspaces of the smiley preset, [s][j].
std::vector<std::vector<std::uint8_t>> smiley_subspaces();

}  // namespace bcm
