#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bcm/dataset.hpp"
#include "bcm/hyperparams.hpp"
#include "bcm/state.hpp"

// Reference computations for the collapsed sampler. Nothing here calls into
// the sampler's math: the joint is built as a sequential Polya-urn product
// and the omega / pi checks integrate numerically.
namespace bcm::oracle {

/// log p(x, z, omega, p | hyper) with phi and pi integrated out, accumulated
/// one cell at a time as predictive (urn) probabilities.
double log_joint(const Dataset& data, const Dataset& pool, const Hyperparams& hyper, const ModelState& state);

/// Conditionals obtained by re-evaluating the joint at every value of the
/// variable and normalizing.
std::vector<double> enumerate_z(const Dataset& data, const Dataset& pool, const Hyperparams& hyper,
                                const ModelState& state, std::size_t i, std::size_t j);
double enumerate_omega(const Dataset& data, const Dataset& pool, const Hyperparams& hyper, const ModelState& state,
                       std::size_t s, std::size_t j);
std::vector<double> enumerate_p(const Dataset& data, const Dataset& pool, const Hyperparams& hyper,
                                const ModelState& state, std::size_t s);

/// p(omega_sj = 1 | rest) for a two-outcome feature by integrating phi over
/// [0, 1] (tanh-sinh quadrature), without any Beta-function identity.
double quadrature_omega(const Dataset& data, const Dataset& pool, const Hyperparams& hyper, const ModelState& state,
                        std::size_t s, std::size_t j);

/// E[pi_i0 | z_i] for S = 2 by quadrature of the Beta posterior.
double quadrature_pi0(const Hyperparams& hyper, const ModelState& state, std::size_t i);

/// A small random problem: N <= 4, P <= 3, S = 2, V_j <= 3.
struct TinyInstance {
  Dataset data;
  Hyperparams hyper;
  ModelState state;
};

/// When `binary` is set every feature has exactly two outcomes.
TinyInstance random_instance(std::uint64_t seed, bool binary = false);

struct SuiteReport {
  std::size_t instances = 0;
  double cond_z = 0.0;            // max relative error vs enumeration
  double cond_p = 0.0;
  double cond_omega_enum = 0.0;
  double cond_omega_quad = 0.0;   // max absolute error vs quadrature
  double log_score = 0.0;         // max absolute error of the collapsed score
  double pi = 0.0;                // max absolute error of estimate_pi

  bool passed(double rel_tol = 1e-9, double quad_tol = 1e-3, double score_tol = 1e-6) const {
    return cond_z <= rel_tol && cond_p <= rel_tol && cond_omega_enum <= rel_tol && cond_omega_quad <= quad_tol &&
           log_score <= score_tol && pi <= rel_tol;
  }
};

/// Compares the sampler's conditionals with the references on `instances`
/// random tiny problems (half of them binary, so quadrature applies).
SuiteReport run_suite(std::size_t instances, std::uint64_t seed);

}  // namespace bcm::oracle
