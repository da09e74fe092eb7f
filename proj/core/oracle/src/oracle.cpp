#include "bcm/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bcm/explain.hpp"
#include "bcm/gibbs.hpp"
#include "bcm/prior.hpp"

namespace bcm::oracle {

namespace {

// Independent restatement of the prototype similarity.
bool similar(const FeatureSpace& features, std::size_t j, Outcome a, Outcome b, const Similarity& sim) {
  if (sim.kind == Similarity::Kind::exact) return a == b;
  const double da = std::stod(features.label(j, a));
  const double db = std::stod(features.label(j, b));
  return (da - db) * (da - db) <= sim.epsilon;
}

std::vector<double> pseudo_counts(const FeatureSpace& features, std::size_t j, Outcome proto, bool on,
                                  const Hyperparams& h) {
  std::vector<double> g(features.cardinality(j));
  for (std::size_t v = 0; v < g.size(); ++v)
    g[v] = h.lambda * (1.0 + ((on && similar(features, j, proto, static_cast<Outcome>(v), h.similarity)) ? h.c : 0.0));
  return g;
}

std::vector<double> normalize_logs(std::vector<double> logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  double total = 0.0;
  for (double& l : logs) total += (l = std::exp(l - top));
  for (double& l : logs) l /= total;
  return logs;
}

double rel_err(double got, double want) {
  const double d = std::abs(got - want);
  return want == 0.0 ? d : d / std::abs(want);
}

}  // namespace

double log_joint(const Dataset& data, const Dataset& pool, const Hyperparams& h, const ModelState& state) {
  const auto& features = data.features();
  const std::size_t n = data.num_observations();
  const std::size_t p = data.num_features();
  const std::size_t s_count = h.clusters;
  double acc = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> seen(s_count, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const auto s = state.assignment(i, j);
      acc += std::log((h.alpha / static_cast<double>(s_count) + seen[s]) / (h.alpha + static_cast<double>(j)));
      seen[s] += 1.0;
    }
  }

  for (std::size_t s = 0; s < s_count; ++s) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto g = pseudo_counts(features, j, pool.at(state.prototype(s), j), state.in_subspace(s, j), h);
      double g_total = 0.0;
      for (double v : g) g_total += v;
      std::vector<double> seen(g.size(), 0.0);
      double drawn = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (state.assignment(i, j) != s) continue;
        const auto v = data.at(i, j);
        acc += std::log((g[v] + seen[v]) / (g_total + drawn));
        seen[v] += 1.0;
        drawn += 1.0;
      }
    }
  }

  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t j = 0; j < p; ++j) acc += std::log(state.in_subspace(s, j) ? h.q : 1.0 - h.q);
  acc -= static_cast<double>(s_count) * std::log(static_cast<double>(pool.num_observations()));
  return acc;
}

std::vector<double> enumerate_z(const Dataset& data, const Dataset& pool, const Hyperparams& h,
                                const ModelState& state, std::size_t i, std::size_t j) {
  std::vector<double> logs(h.clusters);
  ModelState probe = state;
  for (std::size_t s = 0; s < h.clusters; ++s) {
    probe.set_assignment(i, j, static_cast<std::uint32_t>(s));
    logs[s] = log_joint(data, pool, h, probe);
  }
  return normalize_logs(std::move(logs));
}

double enumerate_omega(const Dataset& data, const Dataset& pool, const Hyperparams& h, const ModelState& state,
                       std::size_t s, std::size_t j) {
  ModelState probe = state;
  probe.set_subspace(s, j, false);
  const double off = log_joint(data, pool, h, probe);
  probe.set_subspace(s, j, true);
  const double on = log_joint(data, pool, h, probe);
  return normalize_logs({off, on})[1];
}

std::vector<double> enumerate_p(const Dataset& data, const Dataset& pool, const Hyperparams& h,
                                const ModelState& state, std::size_t s) {
  std::vector<double> logs(pool.num_observations());
  ModelState probe = state;
  for (std::size_t r = 0; r < logs.size(); ++r) {
    probe.set_prototype(s, r);
    logs[r] = log_joint(data, pool, h, probe);
  }
  return normalize_logs(std::move(logs));
}

double quadrature_omega(const Dataset& data, const Dataset& pool, const Hyperparams& h, const ModelState& state,
                        std::size_t s, std::size_t j) {
  const auto& features = data.features();
  if (features.cardinality(j) != 2) throw std::invalid_argument("quadrature_omega needs a two-outcome feature");
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < data.num_observations(); ++i) {
    if (state.assignment(i, j) != s) continue;
    (data.at(i, j) == 0 ? n0 : n1) += 1.0;
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto marginal = [&](bool on) {
    const auto g = pseudo_counts(features, j, pool.at(state.prototype(s), j), on, h);
    auto prior = [&](double t) { return std::pow(t, g[0] - 1.0) * std::pow(1.0 - t, g[1] - 1.0); };
    auto joint = [&](double t) { return prior(t) * std::pow(t, n0) * std::pow(1.0 - t, n1); };
    return integrator.integrate(joint, 0.0, 1.0) / integrator.integrate(prior, 0.0, 1.0);
  };
  const double on = h.q * marginal(true);
  const double off = (1.0 - h.q) * marginal(false);
  return on / (on + off);
}

double quadrature_pi0(const Hyperparams& h, const ModelState& state, std::size_t i) {
  if (h.clusters != 2) throw std::invalid_argument("quadrature_pi0 needs S = 2");
  double n0 = 0.0;
  for (std::size_t j = 0; j < state.num_features(); ++j) n0 += state.assignment(i, j) == 0;
  const double a = h.alpha / 2.0 + n0;
  const double b = h.alpha / 2.0 + (static_cast<double>(state.num_features()) - n0);
  // Integrate t^(a-1) (1-t)^(b-1) f(t) on each half after t = u^(1/a) (left)
  // and 1 - t = u^(1/b) (right), which removes the endpoint singularities.
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto moment = [&](auto f) {
    const double left_end = std::pow(0.5, a);
    const double right_end = std::pow(0.5, b);
    auto left = [&](double u) {
      const double t = std::pow(u, 1.0 / a);
      return std::pow(1.0 - t, b - 1.0) * f(t) / a;
    };
    auto right = [&](double u) {
      const double s = std::pow(u, 1.0 / b);
      return std::pow(1.0 - s, a - 1.0) * f(1.0 - s) / b;
    };
    return integrator.integrate(left, 0.0, left_end) + integrator.integrate(right, 0.0, right_end);
  };
  return moment([](double t) { return t; }) / moment([](double) { return 1.0; });
}

TinyInstance random_instance(std::uint64_t seed, bool binary) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const std::size_t n = pick(2, 4);
  const std::size_t p = pick(1, 3);
  FeatureSpace features;
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t v = binary ? 2 : pick(1, 3);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < v; ++k) labels.push_back(std::to_string(k));
    features.add_feature("f" + std::to_string(j), labels);
  }
  std::vector<Outcome> cells(n * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) cells[i * p + j] = static_cast<Outcome>(pick(0, features.cardinality(j) - 1));

  TinyInstance out{Dataset(features, n, std::move(cells)), Hyperparams{}, ModelState{}};
  out.hyper.clusters = 2;
  out.hyper.alpha = real(0.05, 3.0);
  out.hyper.q = real(0.05, 0.95);
  // Quadrature of x^(g-1) is only smooth for g >= 1.
  out.hyper.lambda = binary ? real(1.0, 3.0) : real(0.2, 3.0);
  out.hyper.c = real(0.0, 60.0);
  if (!binary && pick(0, 3) == 0) out.hyper.similarity = Similarity::threshold(real(0.0, 1.5));

  out.state = ModelState(2, n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) out.state.set_assignment(i, j, static_cast<std::uint32_t>(pick(0, 1)));
  for (std::size_t s = 0; s < 2; ++s) {
    out.state.set_prototype(s, pick(0, n - 1));
    for (std::size_t j = 0; j < p; ++j) out.state.set_subspace(s, j, pick(0, 1) == 1);
  }
  return out;
}

SuiteReport run_suite(std::size_t instances, std::uint64_t seed) {
  SuiteReport report;
  for (std::size_t k = 0; k < instances; ++k) {
    const bool binary = k % 2 == 1;
    const auto inst = random_instance(seed * 1000003ULL + k, binary);
    const auto& data = inst.data;
    const auto& h = inst.hyper;
    const auto& state = inst.state;
    const Posterior post(data, h);
    const auto counts = CountTables::rebuild(data, state);

    for (std::size_t i = 0; i < data.num_observations(); ++i) {
      for (std::size_t j = 0; j < data.num_features(); ++j) {
        CountTables excl = counts;
        excl.remove(state.assignment(i, j), i, j, data.at(i, j));
        const auto got = cond_z(post, state, excl, i, j);
        const auto want = enumerate_z(data, data, h, state, i, j);
        for (std::size_t s = 0; s < got.size(); ++s) report.cond_z = std::max(report.cond_z, rel_err(got[s], want[s]));
      }
    }
    for (std::size_t s = 0; s < h.clusters; ++s) {
      const auto got = cond_p(post, state, counts, s);
      const auto want = enumerate_p(data, data, h, state, s);
      for (std::size_t r = 0; r < got.size(); ++r) report.cond_p = std::max(report.cond_p, rel_err(got[r], want[r]));
      for (std::size_t j = 0; j < data.num_features(); ++j) {
        const double w = cond_omega(post, state, counts, s, j);
        report.cond_omega_enum = std::max(report.cond_omega_enum, rel_err(w, enumerate_omega(data, data, h, state, s, j)));
        if (data.features().cardinality(j) == 2)
          report.cond_omega_quad =
              std::max(report.cond_omega_quad, std::abs(w - quadrature_omega(data, data, h, state, s, j)));
      }
    }
    report.log_score =
        std::max(report.log_score, std::abs(collapsed_log_score(post, state, counts) - log_joint(data, data, h, state)));
    const auto pi = estimate_pi(h, state);
    for (std::size_t i = 0; i < data.num_observations(); ++i)
      report.pi = std::max(report.pi, std::abs(pi[i][0] - quadrature_pi0(h, state, i)));
    ++report.instances;
  }
  return report;
}

}  // namespace bcm::oracle
