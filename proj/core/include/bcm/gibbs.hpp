#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bcm/prior.hpp"
#include "bcm/random.hpp"
#include "bcm/state.hpp"

namespace bcm {

// Collapsed conditionals. phi and pi are integrated out; every function
// below reads the count tables rather than rescanning the data.

/// p(z_ij = s | rest) for s in [0, S). `counts` must already exclude the
/// current assignment of cell (i, j).
std::vector<double> cond_z(const Posterior& post, const ModelState& state, const CountTables& counts,
                           std::size_t i, std::size_t j);

/// p(omega_sj = 1 | rest), computed from log Beta ratios.
double cond_omega(const Posterior& post, const ModelState& state, const CountTables& counts,
                  std::size_t s, std::size_t j);

/// p(p_s = r | rest) over every row r of the prototype pool (uniform prior).
std::vector<double> cond_p(const Posterior& post, const ModelState& state, const CountTables& counts,
                           std::size_t s);

/// Index of the most probable prototype for cluster s; ties go to the lowest
/// row.
std::size_t argmax_prototype(const Posterior& post, const ModelState& state, const CountTables& counts,
                             std::size_t s);

/// log p(x, z, omega, p | hyper) with phi and pi integrated out.
double collapsed_log_score(const Posterior& post, const ModelState& state, const CountTables& counts);
double collapsed_log_score(const Posterior& post, const ModelState& state);

enum class PrototypeUpdate { sample, argmax };

/// z uniform over clusters, omega ~ Bernoulli(q), prototypes uniform over
/// the pool.
ModelState random_state(const Posterior& post, Rng& rng);

/// One full scan: every z_ij, then every omega_sj, then every p_s. Counts
/// are maintained incrementally.
void sweep(const Posterior& post, ModelState& state, CountTables& counts, Rng& rng,
           PrototypeUpdate update = PrototypeUpdate::sample);

struct ChainConfig {
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  /// Trace every `log_every` sweeps (and always after the last one).
  std::size_t log_every = 1;
  PrototypeUpdate prototype_update = PrototypeUpdate::sample;
  /// Start from this state instead of a random one.
  std::optional<ModelState> initial_state;
  /// Independent chains; the one with the best final log-score is kept.
  std::size_t chains = 1;
  /// Recount after every sweep and throw StructuralError on disagreement.
  bool verify_counts = false;
  /// When set, average the posterior-mean pi over logged iterations at or
  /// after this sweep.
  std::optional<std::size_t> average_pi_from;

  /// Throws ConfigError on invalid settings.
  void validate() const;
};

struct TraceEntry {
  std::size_t iteration = 0;
  double log_score = 0.0;
  std::vector<std::size_t> prototypes;
  double omega_density = 0.0;
  std::optional<double> accuracy;
};

struct ChainTrace {
  std::vector<TraceEntry> entries;
};

struct ChainResult {
  ModelState state;
  CountTables counts;
  ChainTrace trace;
  double log_score = 0.0;
  std::size_t chain_index = 0;
  /// Present when ChainConfig::average_pi_from is set; [i][s].
  std::optional<std::vector<std::vector<double>>> averaged_pi;
};

/// Optional per-log hook, e.g. unsupervised accuracy against known labels.
using AccuracyProbe = std::function<double(const ModelState&, const CountTables&)>;

/// Runs config.chains independent chains and keeps the best-scoring one.
/// Throws ConfigError on an invalid config or S > N, NumericalError on a
/// non-finite log-score.
ChainResult run_chain(const Posterior& post, const ChainConfig& config, const AccuracyProbe& probe = {});

}  // namespace bcm
