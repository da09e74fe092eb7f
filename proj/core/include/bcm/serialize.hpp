#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcm/dataset.hpp"
#include "bcm/eval.hpp"
#include "bcm/explain.hpp"
#include "bcm/gibbs.hpp"
#include "bcm/hyperparams.hpp"
#include "bcm/io.hpp"
#include "bcm/state.hpp"

namespace bcm {

/// Everything `bcm fit` persists. Schema in docs/formats.md.
struct FittedModel {
  Hyperparams hyper;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  PrototypeUpdate prototype_update = PrototypeUpdate::sample;
  std::size_t chains = 1;
  FeatureSpace features;
  std::size_t observations = 0;
  ModelState state;
  std::vector<std::string> prototype_ids;
  double log_score = 0.0;
  /// How the dataset was read, so explain/eval re-ingest it identically.
  std::optional<std::size_t> bins;
  std::string id_column = "id";
  std::string label_column = "label";
  std::vector<std::string> dropped_columns;
  std::string trace_file;
  std::optional<std::vector<std::vector<double>>> averaged_pi;
};

std::string model_to_json(const FittedModel& model);
/// Throws DataError on a malformed document.
FittedModel model_from_json(std::string_view text);

/// iteration,log_score,omega_density,accuracy,prototypes
std::string trace_to_csv(const ChainTrace& trace);

/// Planted latents: z, prototypes, omega and dominant labels.
std::string truth_to_json(const ModelState& truth, const Dataset& data);
ModelState truth_from_json(std::string_view text);

std::string explanation_to_json(const Explanation& explanation, const Dataset& data);
std::string eval_report_to_json(const EvalReport& report);

std::string to_string(PrototypeUpdate update);
PrototypeUpdate parse_prototype_update(std::string_view text);

}  // namespace bcm
