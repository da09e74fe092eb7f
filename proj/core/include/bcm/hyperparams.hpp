#pragma once

#include <cstddef>
#include <string>

namespace bcm {

/// How a prototype's value is compared with an outcome when building g.
struct Similarity {
  enum class Kind { exact, thresholded };
  Kind kind = Kind::exact;
  /// Squared-difference threshold; only used when kind == thresholded.
  double epsilon = 0.0;

  static Similarity exact_match() { return {}; }
  static Similarity threshold(double eps) { return {Kind::thresholded, eps}; }
  bool operator==(const Similarity&) const = default;
};

struct Hyperparams {
  std::size_t clusters = 2;  // S
  double alpha = 1.0;        // symmetric Dirichlet mass; alpha / S per cluster
  double q = 0.5;            // Bernoulli rate of subspace indicators
  double lambda = 1.0;       // base pseudo-count of g
  double c = 50.0;           // prototype copy strength
  Similarity similarity;

  double alpha_per_cluster() const { return alpha / static_cast<double>(clusters); }

  /// Throws ConfigError if any value is out of range.
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

std::string to_string(const Hyperparams& h);

}  // namespace bcm
