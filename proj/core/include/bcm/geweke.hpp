#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bcm/dataset.hpp"
#include "bcm/gibbs.hpp"
#include "bcm/hyperparams.hpp"

namespace bcm {

/// Joint-distribution test of the collapsed sampler (Geweke 2004). The
/// prototype pool is held fixed so the joint over (x, z, omega, p) is a
/// proper distribution.
struct GewekeConfig {
  FeatureSpace features;
  std::size_t observations = 5;
  Hyperparams hyper;
  Dataset pool;
  std::size_t draws = 10000;
  /// Gibbs-sweep + data-regeneration cycles between recorded
  /// successive-conditional draws.
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  PrototypeUpdate prototype_update = PrototypeUpdate::sample;
  /// Hyperparameters the Gibbs sweeps assume, when they differ from the
  /// generating ones. Only useful as a negative control.
  std::optional<Hyperparams> sampler_hyper;
};

/// Test statistics per draw.
struct GewekeSample {
  std::vector<std::size_t> omega_ones;     // number of omega_sj = 1
  std::vector<std::size_t> cluster0_cells; // number of cells with z_ij = 0
};

GewekeSample geweke_forward(const GewekeConfig& config);
GewekeSample geweke_successive(const GewekeConfig& config);

}  // namespace bcm
