#include "bcm/gibbs.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "bcm/error.hpp"
#include "bcm/explain.hpp"
#include "bcm/math.hpp"

namespace bcm {

namespace {

// Scratch buffers reused across a sweep.
struct Workspace {
  explicit Workspace(const Posterior& post)
      : weights(post.num_clusters()),
        g(post.data().features().max_cardinality()),
        table(post.data().features().total_outcomes()),
        log_weights(post.pool_size()) {}

  std::vector<double> weights;
  std::vector<double> g;
  std::vector<double> table;
  std::vector<double> log_weights;
};

void z_weights(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t i,
               std::size_t j, std::span<double> out) {
  const auto& prior = post.prior();
  const Outcome x = post.data().at(i, j);
  const double alpha_s = post.hyper().alpha_per_cluster();
  for (std::size_t s = 0; s < out.size(); ++s) {
    const Outcome pv = post.prototype_value(state, s, j);
    const bool on = state.in_subspace(s, j);
    // The (alpha + n) denominator is common to every s and drops out.
    const double mixture = alpha_s + counts.observation_count(s, i);
    const double emission =
        (prior.g(j, pv, on, x) + counts.outcome_count(s, j, x)) / (prior.g_total(j, pv, on) + counts.feature_total(s, j));
    out[s] = mixture * emission;
  }
}

double omega_probability(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t s,
                         std::size_t j, std::span<double> g) {
  const double q = post.hyper().q;
  if (counts.feature_total(s, j) == 0) return q;
  const auto n = counts.outcome_counts(s, j);
  const auto gv = g.first(n.size());
  const Outcome pv = post.prototype_value(state, s, j);
  post.prior().fill(j, pv, true, gv);
  const double on = std::log(q) + log_beta_ratio(gv, n);
  post.prior().fill(j, pv, false, gv);
  const double off = std::log1p(-q) + log_beta_ratio(gv, n);
  return 1.0 / (1.0 + std::exp(off - on));
}

// Unnormalized log p(p_s = r | rest) for every pool row r. Features outside
// the subspace contribute a constant and are skipped.
void prototype_log_weights(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t s,
                           Workspace& ws) {
  const auto& features = post.data().features();
  const auto& pool = post.pool();
  const std::size_t p_count = features.size();
  std::fill(ws.log_weights.begin(), ws.log_weights.end(), 0.0);
  if (counts.cluster_total(s) == 0) return;
  for (std::size_t j = 0; j < p_count; ++j) {
    if (!state.in_subspace(s, j) || counts.feature_total(s, j) == 0) continue;
    const auto n = counts.outcome_counts(s, j);
    const auto gv = std::span<double>(ws.g).first(n.size());
    for (std::size_t pv = 0; pv < n.size(); ++pv) {
      post.prior().fill(j, static_cast<Outcome>(pv), true, gv);
      ws.table[features.offset(j) + pv] = log_beta_ratio(gv, n);
    }
  }
  for (std::size_t r = 0; r < pool.num_observations(); ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p_count; ++j) {
      if (!state.in_subspace(s, j) || counts.feature_total(s, j) == 0) continue;
      acc += ws.table[features.offset(j) + pool.at(r, j)];
    }
    ws.log_weights[r] = acc;
  }
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < values.size(); ++r)
    if (values[r] > values[best]) best = r;
  return best;
}

}  // namespace

std::vector<double> cond_z(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t i,
                           std::size_t j) {
  std::vector<double> out(post.num_clusters());
  z_weights(post, state, counts, i, j, out);
  normalize_weights(out);
  return out;
}

double cond_omega(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t s,
                  std::size_t j) {
  std::vector<double> g(post.data().features().cardinality(j));
  return omega_probability(post, state, counts, s, j, g);
}

std::vector<double> cond_p(const Posterior& post, const ModelState& state, const CountTables& counts, std::size_t s) {
  Workspace ws(post);
  prototype_log_weights(post, state, counts, s, ws);
  normalize_log_weights(ws.log_weights);
  return ws.log_weights;
}

std::size_t argmax_prototype(const Posterior& post, const ModelState& state, const CountTables& counts,
                             std::size_t s) {
  Workspace ws(post);
  prototype_log_weights(post, state, counts, s, ws);
  return argmax_lowest(ws.log_weights);
}

double collapsed_log_score(const Posterior& post, const ModelState& state, const CountTables& counts) {
  const auto& hyper = post.hyper();
  const std::size_t s_count = post.num_clusters();
  const std::size_t p_count = post.num_features();
  const double alpha_s = hyper.alpha_per_cluster();

  double mixture = 0.0;
  for (std::size_t i = 0; i < post.num_observations(); ++i) {
    mixture -= log_rising(hyper.alpha, p_count);
    for (std::size_t s = 0; s < s_count; ++s) mixture += log_rising(alpha_s, counts.observation_count(s, i));
  }

  double emission = 0.0;
  std::vector<double> g(post.data().features().max_cardinality());
  for (std::size_t s = 0; s < s_count; ++s) {
    for (std::size_t j = 0; j < p_count; ++j) {
      const auto n = counts.outcome_counts(s, j);
      const auto gv = std::span<double>(g).first(n.size());
      post.prior().fill(j, post.prototype_value(state, s, j), state.in_subspace(s, j), gv);
      emission += log_beta_ratio(gv, n);
    }
  }

  const double log_q = std::log(hyper.q);
  const double log_not_q = std::log1p(-hyper.q);
  double subspace = 0.0;
  for (auto w : state.omega()) subspace += w ? log_q : log_not_q;

  const double prototypes = -static_cast<double>(s_count) * std::log(static_cast<double>(post.pool_size()));
  return mixture + emission + subspace + prototypes;
}

double collapsed_log_score(const Posterior& post, const ModelState& state) {
  post.check(state);
  return collapsed_log_score(post, state, CountTables::rebuild(post.data(), state));
}

ModelState random_state(const Posterior& post, Rng& rng) {
  const std::size_t s_count = post.num_clusters();
  ModelState state(s_count, post.num_observations(), post.num_features());
  for (std::size_t i = 0; i < post.num_observations(); ++i)
    for (std::size_t j = 0; j < post.num_features(); ++j)
      state.set_assignment(i, j, static_cast<std::uint32_t>(uniform_index(s_count, rng)));
  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t j = 0; j < post.num_features(); ++j) state.set_subspace(s, j, bernoulli(post.hyper().q, rng));
  for (std::size_t s = 0; s < s_count; ++s) state.set_prototype(s, uniform_index(post.pool_size(), rng));
  return state;
}

void sweep(const Posterior& post, ModelState& state, CountTables& counts, Rng& rng, PrototypeUpdate update) {
  Workspace ws(post);
  const auto& data = post.data();
  const std::size_t s_count = post.num_clusters();

  for (std::size_t i = 0; i < data.num_observations(); ++i) {
    for (std::size_t j = 0; j < data.num_features(); ++j) {
      const Outcome x = data.at(i, j);
      counts.remove(state.assignment(i, j), i, j, x);
      z_weights(post, state, counts, i, j, ws.weights);
      const auto s = static_cast<std::uint32_t>(sample_categorical(ws.weights, rng));
      state.set_assignment(i, j, s);
      counts.add(s, i, j, x);
    }
  }

  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t j = 0; j < data.num_features(); ++j)
      state.set_subspace(s, j, bernoulli(omega_probability(post, state, counts, s, j, ws.g), rng));

  for (std::size_t s = 0; s < s_count; ++s) {
    prototype_log_weights(post, state, counts, s, ws);
    if (update == PrototypeUpdate::argmax) {
      state.set_prototype(s, argmax_lowest(ws.log_weights));
    } else {
      normalize_log_weights(ws.log_weights);
      state.set_prototype(s, sample_categorical(ws.log_weights, rng));
    }
  }

  assert(counts == CountTables::rebuild(data, state));
}

void ChainConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (log_every < 1) throw ConfigError("log cadence must be >= 1");
  if (chains < 1) throw ConfigError("chains must be >= 1");
}

ChainResult run_chain(const Posterior& post, const ChainConfig& config, const AccuracyProbe& probe) {
  config.validate();
  if (post.num_clusters() > post.num_observations())
    throw ConfigError("S = " + std::to_string(post.num_clusters()) + " exceeds N = " +
                      std::to_string(post.num_observations()));
  if (config.initial_state) post.check(*config.initial_state);

  std::optional<ChainResult> best;
  for (std::size_t chain = 0; chain < config.chains; ++chain) {
    Rng rng = make_rng(config.seed, chain);
    ChainResult result;
    result.chain_index = chain;
    result.state = config.initial_state ? *config.initial_state : random_state(post, rng);
    result.counts = CountTables::rebuild(post.data(), result.state);

    std::vector<std::vector<double>> pi_sum;
    std::size_t pi_samples = 0;

    auto log_entry = [&](std::size_t iteration) {
      TraceEntry entry;
      entry.iteration = iteration;
      entry.log_score = collapsed_log_score(post, result.state, result.counts);
      if (!std::isfinite(entry.log_score))
        throw NumericalError("non-finite collapsed log-score at iteration " + std::to_string(iteration));
      entry.prototypes.assign(result.state.prototypes().begin(), result.state.prototypes().end());
      entry.omega_density = result.state.omega_density();
      if (probe) entry.accuracy = probe(result.state, result.counts);
      result.log_score = entry.log_score;
      result.trace.entries.push_back(std::move(entry));

      if (config.average_pi_from && iteration >= *config.average_pi_from) {
        auto pi = estimate_pi(post.hyper(), result.counts, post.num_features());
        if (pi_sum.empty()) pi_sum.assign(pi.size(), std::vector<double>(post.num_clusters(), 0.0));
        for (std::size_t i = 0; i < pi.size(); ++i)
          for (std::size_t s = 0; s < pi[i].size(); ++s) pi_sum[i][s] += pi[i][s];
        ++pi_samples;
      }
    };

    log_entry(0);
    for (std::size_t it = 1; it <= config.iterations; ++it) {
      sweep(post, result.state, result.counts, rng, config.prototype_update);
      if (config.verify_counts && !(result.counts == CountTables::rebuild(post.data(), result.state)))
        throw StructuralError("incremental counts diverged from a recount at sweep " + std::to_string(it));
      if (it % config.log_every == 0 || it == config.iterations) log_entry(it);
    }

    if (pi_samples > 0) {
      for (auto& row : pi_sum)
        for (double& v : row) v /= static_cast<double>(pi_samples);
      result.averaged_pi = std::move(pi_sum);
    }

    if (!best || result.log_score > best->log_score) best = std::move(result);
  }
  return std::move(*best);
}

}  // namespace bcm
