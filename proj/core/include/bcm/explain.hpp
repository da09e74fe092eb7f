#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcm/prior.hpp"
#include "bcm/state.hpp"

namespace bcm {

using PhiEstimate = std::vector<std::vector<std::vector<double>>>;  // [s][j][v]

/// Posterior-mean phi: (g_v + njv) / (sum_u g_u + nj).
PhiEstimate estimate_phi(const Posterior& post, const ModelState& state, const CountTables& counts);

/// Posterior-mean pi: (alpha/S + ni) / (alpha + P), [i][s].
std::vector<std::vector<double>> estimate_pi(const Hyperparams& hyper, const CountTables& counts,
                                             std::size_t features);
std::vector<std::vector<double>> estimate_pi(const Hyperparams& hyper, const ModelState& state);

struct ClusterExplanation {
  std::size_t cluster = 0;
  /// No cell is assigned to the cluster; prototype fields are unset.
  bool empty = false;
  std::optional<std::size_t> prototype_row;
  std::string prototype_id;
  std::vector<Outcome> prototype_values;
  std::vector<std::uint8_t> subspace;
  std::vector<std::size_t> subspace_features;
  std::uint64_t assigned_cells = 0;
  std::size_t dominant_observations = 0;
};

struct Explanation {
  std::vector<ClusterExplanation> clusters;
  std::vector<std::vector<double>> pi;  // [i][s]
  PhiEstimate phi;
};

/// Prototypes are re-selected by argmax of cond_p regardless of how the
/// chain updated them; subspaces are the state's omega.
Explanation extract_explanation(const Posterior& post, const ModelState& state, const CountTables& counts);

struct MarkdownOptions {
  /// When nonzero and dividing P, subspace masks are also drawn as a grid of
  /// this width (16 for 16x16 digit bitmaps).
  std::size_t grid_width = 0;
};

/// One section per cluster: prototype, its values on the subspace and the
/// full row with subspace features marked.
std::string render_markdown(const Explanation& explanation, const Dataset& data,
                            const MarkdownOptions& options = {});

/// '#' for features in the subspace, '.' otherwise, `width` per line.
std::string render_mask_grid(const std::vector<std::uint8_t>& mask, std::size_t width);

/// Binary PGM (P5) of a mask: 255 in the subspace, 0 elsewhere.
std::string render_mask_pgm(const std::vector<std::uint8_t>& mask, std::size_t width);

}  // namespace bcm
