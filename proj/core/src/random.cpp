#include "bcm/random.hpp"

#include <algorithm>
#include <cmath>

#include "bcm/error.hpp"
#include "bcm/math.hpp"

namespace bcm {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  // 53 random bits, shifted to the midpoint of each bucket: never 0 or 1.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

bool bernoulli(double p, Rng& rng) { return uniform_open(rng) < p; }

std::size_t uniform_index(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("categorical weights have no positive finite sum");
  const double u = uniform_open(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (u < acc) return k;
  }
  return last_positive;
}

double log_gamma_variate(double shape, Rng& rng) {
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  double g = gamma(rng);
  while (!(g > 0.0)) g = gamma(rng);
  return std::log(g) + std::log(uniform_open(rng)) / shape;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
  std::vector<double> out(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k) out[k] = log_gamma_variate(alpha[k], rng);
  normalize_log_weights(out);
  return out;
}

std::vector<double> sample_symmetric_dirichlet(std::size_t k, double alpha, Rng& rng) {
  std::vector<double> a(k, alpha);
  return sample_dirichlet(a, rng);
}

}  // namespace bcm
