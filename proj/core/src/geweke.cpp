#include "bcm/geweke.hpp"

#include "bcm/error.hpp"
#include "bcm/generate.hpp"
#include "bcm/gibbs.hpp"
#include "bcm/prior.hpp"

namespace bcm {

namespace {

void record(GewekeSample& out, const ModelState& state) {
  std::size_t ones = 0;
  for (auto w : state.omega()) ones += w;
  std::size_t zeros = 0;
  for (auto s : state.assignments()) zeros += (s == 0);
  out.omega_ones.push_back(ones);
  out.cluster0_cells.push_back(zeros);
}

void check(const GewekeConfig& config) {
  config.hyper.validate();
  if (config.draws == 0 || config.thin == 0) throw ConfigError("Geweke draws and thinning must be >= 1");
  if (config.pool.num_observations() == 0) throw ConfigError("Geweke test needs a prototype pool");
}

}  // namespace

GewekeSample geweke_forward(const GewekeConfig& config) {
  check(config);
  GewekeSample out;
  Rng seeds = make_rng(config.seed, 1);
  for (std::size_t d = 0; d < config.draws; ++d) {
    const auto draw = sample_prior(config.features, config.observations, config.hyper, config.pool, seeds());
    record(out, draw.latent);
  }
  return out;
}

GewekeSample geweke_successive(const GewekeConfig& config) {
  check(config);
  GewekeSample out;
  auto draw = sample_prior(config.features, config.observations, config.hyper, config.pool, config.seed);
  Dataset data = draw.data;
  ModelState state = draw.latent;
  Rng rng = make_rng(config.seed, 2);
  const Hyperparams& target = config.sampler_hyper ? *config.sampler_hyper : config.hyper;
  for (std::size_t d = 0; d < config.draws; ++d) {
    for (std::size_t t = 0; t < config.thin; ++t) {
      const Posterior post(data, config.pool, target);
      CountTables counts = CountTables::rebuild(data, state);
      sweep(post, state, counts, rng, config.prototype_update);
      resample_data(data, state, config.pool, config.hyper, rng);
    }
    record(out, state);
  }
  return out;
}

}  // namespace bcm
