#include "bcm/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bcm/error.hpp"

namespace bcm {

namespace {
constexpr std::uint64_t kDirectSumLimit = 16;
}

double log_rising(double a, std::uint64_t n) {
  if (n == 0) return 0.0;
  if (n <= kDirectSumLimit) {
    double acc = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) acc += std::log(a + static_cast<double>(k));
    return acc;
  }
  return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
}

double log_beta_ratio(std::span<const double> g, std::span<const std::uint32_t> n) {
  double total_g = 0.0;
  std::uint64_t total_n = 0;
  double acc = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    acc += log_rising(g[v], n[v]);
    total_g += g[v];
    total_n += n[v];
  }
  return acc - log_rising(total_g, total_n);
}

double log_multivariate_beta(std::span<const double> a) {
  double acc = 0.0;
  double total = 0.0;
  for (double x : a) {
    acc += std::lgamma(x);
    total += x;
  }
  return acc - std::lgamma(total);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

void normalize_log_weights(std::span<double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) throw NumericalError("log-weights have no finite maximum");
  for (double& v : values) v = std::exp(v - top);
  normalize_weights(values);
}

void normalize_weights(std::span<double> values) {
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("weights do not have a positive finite sum");
  for (double& v : values) v /= total;
}

}  // namespace bcm
