#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bcm {

/// log Gamma(a + n) - log Gamma(a) for a > 0 and integer n >= 0.
///
/// Small n is summed term by term, which stays accurate when a is huge
/// (a = lambda * (1 + c) with c up to 1e8) and the lgamma difference would
/// cancel catastrophically.
double log_rising(double a, std::uint64_t n);

/// log( B(g + n) / B(g) ) where B is the multivariate Beta function.
double log_beta_ratio(std::span<const double> g, std::span<const std::uint32_t> n);

/// log B(a) = sum_v lgamma(a_v) - lgamma(sum_v a_v).
double log_multivariate_beta(std::span<const double> a);

double log_sum_exp(std::span<const double> values);

/// Turns log-weights into a probability vector in place.
void normalize_log_weights(std::span<double> values);

/// Scales nonnegative weights to sum to one in place. Throws NumericalError
/// when the total is zero or not finite.
void normalize_weights(std::span<double> values);

}  // namespace bcm
