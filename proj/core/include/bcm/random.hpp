#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bcm {

using Rng = std::mt19937_64;

/// Independent stream `stream` for a user seed.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform on the open interval (0, 1), 53 bits.
double uniform_open(Rng& rng);

bool bernoulli(double p, Rng& rng);

std::size_t uniform_index(std::size_t n, Rng& rng);

/// Draws an index with probability proportional to `weights` (need not be
/// normalized; must have a positive finite sum).
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

/// log of a Gamma(shape, 1) variate. Uses Gamma(a) = Gamma(a+1) * U^(1/a), so
/// shapes far below one do not underflow to zero.
double log_gamma_variate(double shape, Rng& rng);

/// Dirichlet draw, normalized in log space. Entries sum to one.
std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);

std::vector<double> sample_symmetric_dirichlet(std::size_t k, double alpha, Rng& rng);

}  // namespace bcm
