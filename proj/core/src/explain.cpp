#include "bcm/explain.hpp"

#include <sstream>

#include "bcm/error.hpp"
#include "bcm/eval.hpp"
#include "bcm/gibbs.hpp"

namespace bcm {

PhiEstimate estimate_phi(const Posterior& post, const ModelState& state, const CountTables& counts) {
  const auto& features = post.data().features();
  PhiEstimate phi(post.num_clusters());
  for (std::size_t s = 0; s < post.num_clusters(); ++s) {
    phi[s].resize(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
      const Outcome pv = post.prototype_value(state, s, j);
      const bool on = state.in_subspace(s, j);
      const double denom = post.prior().g_total(j, pv, on) + counts.feature_total(s, j);
      auto& row = phi[s][j];
      row.resize(features.cardinality(j));
      for (std::size_t v = 0; v < row.size(); ++v) {
        const auto o = static_cast<Outcome>(v);
        row[v] = (post.prior().g(j, pv, on, o) + counts.outcome_count(s, j, o)) / denom;
      }
    }
  }
  return phi;
}

std::vector<std::vector<double>> estimate_pi(const Hyperparams& hyper, const CountTables& counts,
                                             std::size_t features) {
  const std::size_t s_count = counts.num_clusters();
  const double alpha_s = hyper.alpha / static_cast<double>(s_count);
  const double denom = hyper.alpha + static_cast<double>(features);
  std::vector<std::vector<double>> pi(counts.num_observations(), std::vector<double>(s_count));
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (std::size_t s = 0; s < s_count; ++s) pi[i][s] = (alpha_s + counts.observation_count(s, i)) / denom;
  return pi;
}

std::vector<std::vector<double>> estimate_pi(const Hyperparams& hyper, const ModelState& state) {
  const std::size_t s_count = state.num_clusters();
  const std::size_t p_count = state.num_features();
  const double alpha_s = hyper.alpha / static_cast<double>(s_count);
  const double denom = hyper.alpha + static_cast<double>(p_count);
  std::vector<std::vector<double>> pi(state.num_observations(), std::vector<double>(s_count, alpha_s));
  for (std::size_t i = 0; i < pi.size(); ++i) {
    for (std::size_t j = 0; j < p_count; ++j) pi[i][state.assignment(i, j)] += 1.0;
    for (double& v : pi[i]) v /= denom;
  }
  return pi;
}

Explanation extract_explanation(const Posterior& post, const ModelState& state, const CountTables& counts) {
  post.check(state);
  const auto& pool = post.pool();
  const auto dominant = dominant_clusters(counts);

  Explanation out;
  out.pi = estimate_pi(post.hyper(), counts, post.num_features());
  out.phi = estimate_phi(post, state, counts);
  for (std::size_t s = 0; s < post.num_clusters(); ++s) {
    ClusterExplanation c;
    c.cluster = s;
    c.assigned_cells = counts.cluster_total(s);
    for (auto d : dominant) c.dominant_observations += (d == s);
    auto sub = state.subspace(s);
    c.subspace.assign(sub.begin(), sub.end());
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (sub[j]) c.subspace_features.push_back(j);
    if (c.assigned_cells == 0) {
      c.empty = true;
    } else {
      const std::size_t row = argmax_prototype(post, state, counts, s);
      c.prototype_row = row;
      c.prototype_id = pool.id(row);
      auto values = pool.row(row);
      c.prototype_values.assign(values.begin(), values.end());
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

std::string render_mask_grid(const std::vector<std::uint8_t>& mask, std::size_t width) {
  if (width == 0 || mask.size() % width != 0) throw ConfigError("grid width must divide the feature count");
  std::string out;
  for (std::size_t k = 0; k < mask.size(); ++k) {
    out += mask[k] ? '#' : '.';
    if ((k + 1) % width == 0) out += '\n';
  }
  return out;
}

std::string render_mask_pgm(const std::vector<std::uint8_t>& mask, std::size_t width) {
  if (width == 0 || mask.size() % width != 0) throw ConfigError("grid width must divide the feature count");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(mask.size() / width) + "\n255\n";
  for (auto m : mask) out += static_cast<char>(m ? 255 : 0);
  return out;
}

std::string render_markdown(const Explanation& explanation, const Dataset& data, const MarkdownOptions& options) {
  const auto& features = data.features();
  std::ostringstream md;
  md << "# Cluster explanations\n\n";
  for (const auto& c : explanation.clusters) {
    md << "## Cluster " << c.cluster << "\n\n";
    md << "- assigned feature values: " << c.assigned_cells << "\n";
    md << "- observations dominated: " << c.dominant_observations << "\n";
    if (c.empty) {
      md << "- status: empty (no prototype)\n\n";
      continue;
    }
    md << "- prototype: `" << c.prototype_id << "` (row " << *c.prototype_row << ")";
    if (data.has_labels() && *c.prototype_row < data.num_observations())
      md << ", label `" << data.labels()->names[data.labels()->ids[*c.prototype_row]] << "`";
    md << "\n\n";

    md << "### Subspace\n\n";
    if (c.subspace_features.empty()) {
      md << "_No important features._\n\n";
    } else {
      for (auto j : c.subspace_features)
        md << "- **" << features.name(j) << "** = " << features.label(j, c.prototype_values[j]) << "\n";
      md << "\n";
    }

    if (options.grid_width != 0 && c.subspace.size() % options.grid_width == 0) {
      md << "```\n" << render_mask_grid(c.subspace, options.grid_width) << "```\n\n";
    }

    md << "### Prototype row\n\n| feature | value | important |\n|---|---|---|\n";
    for (std::size_t j = 0; j < features.size(); ++j) {
      const bool on = c.subspace[j] != 0;
      const auto& value = features.label(j, c.prototype_values[j]);
      if (on)
        md << "| **" << features.name(j) << "** | **" << value << "** | yes |\n";
      else
        md << "| " << features.name(j) << " | " << value << " | |\n";
    }
    md << "\n";
  }
  return md.str();
}

}  // namespace bcm
