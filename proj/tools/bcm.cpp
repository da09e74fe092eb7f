#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcm/error.hpp"
#include "bcm/eval.hpp"
#include "bcm/explain.hpp"
#include "bcm/generate.hpp"
#include "bcm/gibbs.hpp"
#include "bcm/io.hpp"
#include "bcm/oracle/oracle.hpp"
#include "bcm/serialize.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Globals {
  std::uint64_t seed = 0;
  bool verbose = false;
};

void info(const Globals& g, const std::string& line) {
  if (g.verbose) std::cerr << line << "\n";
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// How a dataset file is read. Shared by every command that takes data.
struct DataOptions {
  std::optional<std::size_t> bins;
  std::string id_column = "id";
  std::string label_column = "label";
  std::vector<std::string> drop;
  std::string vocab;
  bool text = false;
  bool labelled = false;
  std::size_t terms = 100;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--bins", bins, "Equal-width bins for every feature column (k >= 2)");
    cmd.add_option("--id-col", id_column, "Observation id column")->capture_default_str();
    cmd.add_option("--label-col,--labels", label_column, "Label column")->capture_default_str();
    cmd.add_option("--drop", drop, "Columns to ignore");
    cmd.add_option("--vocab", vocab, "Vocabulary JSON pinning outcome order");
    cmd.add_flag("--text", text, "Input is a text corpus, one document per line");
    cmd.add_flag("--labelled", labelled, "Text lines are 'label<TAB>text'");
    cmd.add_option("--terms", terms, "Vocabulary size for text input")->capture_default_str();
  }
};

bcm::IngestResult load(const fs::path& path, const DataOptions& o, const bcm::VocabMap& pinned = {}) {
  if (o.text) return bcm::read_text_corpus(path, o.terms, o.labelled);
  bcm::IngestSpec spec;
  spec.source = path;
  spec.bins = o.bins;
  spec.id_column = o.id_column;
  spec.label_column = o.label_column;
  for (const auto& c : o.drop) spec.roles[c] = bcm::ColumnRole::drop;
  if (!o.vocab.empty()) spec.vocab_path = fs::path(o.vocab);
  spec.vocab = pinned;
  return bcm::ingest(spec);
}

// Re-reads a dataset exactly as it was read for the fit.
bcm::Dataset load_for_model(const fs::path& path, const bcm::FittedModel& model, DataOptions o) {
  bcm::VocabMap pinned;
  if (!o.text) {
    o.bins = model.bins;
    o.id_column = model.id_column;
    o.label_column = o.label_column.empty() ? model.label_column : o.label_column;
    o.drop = model.dropped_columns;
    for (std::size_t j = 0; j < model.features.size(); ++j) {
      const auto labels = model.features.outcomes(j);
      pinned[model.features.name(j)] = {labels.begin(), labels.end()};
    }
  }
  auto result = load(path, o, pinned);
  warn(result.warnings);
  if (!(result.data.features() == model.features))
    throw bcm::DataError("dataset features do not match the fitted model");
  if (result.data.num_observations() != model.observations)
    throw bcm::DataError("dataset has " + std::to_string(result.data.num_observations()) +
                         " observations; the model was fitted on " + std::to_string(model.observations));
  return std::move(result.data);
}

struct HyperOptions {
  bcm::Hyperparams hyper;
  double epsilon = -1.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--clusters,-S", hyper.clusters, "Number of clusters S")->capture_default_str();
    cmd.add_option("--alpha", hyper.alpha, "Dirichlet mass of the mixture weights")->capture_default_str();
    cmd.add_option("--q", hyper.q, "Prior rate of subspace indicators")->capture_default_str();
    cmd.add_option("--lambda", hyper.lambda, "Base pseudo-count")->capture_default_str();
    cmd.add_option("--c", hyper.c, "Prototype copy strength")->capture_default_str();
    cmd.add_option("--epsilon", epsilon, "Thresholded similarity on numeric outcomes, (p - v)^2 <= epsilon");
  }
  bcm::Hyperparams get() const {
    auto h = hyper;
    if (epsilon >= 0.0) h.similarity = bcm::Similarity::threshold(epsilon);
    h.validate();
    return h;
  }
};

struct ChainOptions {
  std::size_t iterations = 1000;
  std::size_t log_every = 10;
  std::size_t chains = 1;
  std::string prototype_update = "sample";
  std::optional<std::size_t> average_pi_from;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--iters", iterations, "Gibbs sweeps")->capture_default_str();
    cmd.add_option("--log-every", log_every, "Trace cadence in sweeps")->capture_default_str();
    cmd.add_option("--chains", chains, "Independent chains; the best-scoring one is kept")->capture_default_str();
    cmd.add_option("--prototype-update", prototype_update, "sample | argmax")->capture_default_str();
    cmd.add_option("--average-pi-from", average_pi_from, "Average pi over logged sweeps from this one on");
  }
  bcm::ChainConfig get(std::uint64_t seed) const {
    bcm::ChainConfig c;
    c.iterations = iterations;
    c.log_every = log_every;
    c.chains = chains;
    c.seed = seed;
    c.prototype_update = bcm::parse_prototype_update(prototype_update);
    c.average_pi_from = average_pi_from;
    c.validate();
    return c;
  }
};

fs::path trace_path_for(const fs::path& model) {
  auto p = model;
  p.replace_extension();
  return p.string() + ".trace.csv";
}

int cmd_generate(const Globals& g, const std::string& preset, std::size_t observations, const fs::path& out,
                 const std::optional<fs::path>& truth) {
  if (preset != "smiley") throw bcm::ConfigError("unknown preset '" + preset + "' (available: smiley)");
  bcm::SmileyOptions options;
  options.observations = observations;
  const auto smiley = bcm::make_smiley_dataset(g.seed, options);
  bcm::write_file_atomic(out, bcm::dataset_to_csv(smiley.data));
  bcm::write_file_atomic(bcm::vocab_sidecar(out), bcm::vocab_to_json(smiley.data));
  if (truth) bcm::write_file_atomic(*truth, bcm::truth_to_json(smiley.truth, smiley.data));
  info(g, "wrote " + out.string() + " (" + std::to_string(smiley.data.num_observations()) + " observations)");
  return kOk;
}

int cmd_fit(const Globals& g, const fs::path& data_path, const DataOptions& data_options, const HyperOptions& ho,
            const ChainOptions& co, const fs::path& out) {
  const auto loaded = load(data_path, data_options);
  warn(loaded.warnings);
  const auto& data = loaded.data;
  const auto hyper = ho.get();
  const auto config = co.get(g.seed);
  const bcm::Posterior post(data, hyper);

  bcm::AccuracyProbe probe;
  if (data.has_labels())
    probe = [&](const bcm::ModelState& s, const bcm::CountTables& c) { return bcm::unsupervised_accuracy(post, s, c); };
  info(g, "fitting " + bcm::to_string(hyper) + " on " + std::to_string(data.num_observations()) + "x" +
              std::to_string(data.num_features()));
  const auto result = bcm::run_chain(post, config, probe);

  bcm::FittedModel model;
  model.hyper = hyper;
  model.iterations = config.iterations;
  model.seed = config.seed;
  model.prototype_update = config.prototype_update;
  model.chains = config.chains;
  model.features = data.features();
  model.observations = data.num_observations();
  model.state = result.state;
  for (auto p : result.state.prototypes()) model.prototype_ids.push_back(data.id(p));
  model.log_score = result.log_score;
  model.bins = data_options.text ? std::nullopt : data_options.bins;
  model.id_column = data_options.id_column;
  model.label_column = data_options.label_column;
  model.dropped_columns = data_options.drop;
  const auto trace_path = trace_path_for(out);
  model.trace_file = trace_path.filename().string();
  model.averaged_pi = result.averaged_pi;

  bcm::write_file_atomic(trace_path, bcm::trace_to_csv(result.trace));
  bcm::write_file_atomic(out, bcm::model_to_json(model));
  info(g, "chain " + std::to_string(result.chain_index) + " kept, log-score " + std::to_string(result.log_score));
  return kOk;
}

int cmd_explain(const Globals& g, const fs::path& model_path, const fs::path& data_path, DataOptions data_options,
                const std::string& format, std::size_t grid_width, const std::optional<fs::path>& pgm_dir,
                const std::optional<fs::path>& out) {
  const auto model = bcm::model_from_json(bcm::read_file(model_path));
  data_options.label_column.clear();
  const auto data = load_for_model(data_path, model, data_options);
  const bcm::Posterior post(data, model.hyper);
  post.check(model.state);
  const auto counts = bcm::CountTables::rebuild(data, model.state);
  auto explanation = bcm::extract_explanation(post, model.state, counts);
  if (model.averaged_pi) explanation.pi = *model.averaged_pi;

  std::string text;
  if (format == "json") {
    text = bcm::explanation_to_json(explanation, data);
  } else if (format == "markdown") {
    text = bcm::render_markdown(explanation, data, bcm::MarkdownOptions{grid_width});
  } else {
    throw bcm::ConfigError("unknown format '" + format + "' (json | markdown)");
  }
  if (pgm_dir) {
    if (grid_width == 0) throw bcm::ConfigError("--pgm needs --grid-width");
    fs::create_directories(*pgm_dir);
    for (const auto& c : explanation.clusters)
      bcm::write_file_atomic(*pgm_dir / ("cluster" + std::to_string(c.cluster) + ".pgm"),
                             bcm::render_mask_pgm(c.subspace, grid_width));
  }
  if (out) {
    bcm::write_file_atomic(*out, text);
    info(g, "wrote " + out->string());
  } else {
    std::cout << text;
  }
  return kOk;
}

int cmd_eval(const Globals& g, const fs::path& model_path, const fs::path& data_path, DataOptions data_options,
             bool label_given, std::size_t folds, const std::optional<fs::path>& out) {
  const auto model = bcm::model_from_json(bcm::read_file(model_path));
  if (!label_given) data_options.label_column.clear();
  const auto data = load_for_model(data_path, model, data_options);
  if (!data.has_labels()) throw bcm::EvalError("dataset has no label column");
  const bcm::Posterior post(data, model.hyper);
  post.check(model.state);
  const auto counts = bcm::CountTables::rebuild(data, model.state);
  const auto report = bcm::evaluate(post, model.state, counts, folds, g.seed);
  warn(report.warnings);
  const auto text = bcm::eval_report_to_json(report);
  if (out) {
    bcm::write_file_atomic(*out, text);
    info(g, "wrote " + out->string());
  } else {
    std::cout << text;
  }
  return kOk;
}

bcm::SweepGrid read_grid(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(bcm::read_file(path));
  } catch (const json::exception& e) {
    throw bcm::DataError("grid '" + path.string() + "': " + e.what());
  }
  if (!doc.is_object()) throw bcm::DataError("grid must be a JSON object with q, lambda and/or c arrays");
  bcm::SweepGrid grid;
  for (const auto& [key, target] : {std::pair{"q", &grid.q}, {"lambda", &grid.lambda}, {"c", &grid.c}}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_array()) throw bcm::DataError(std::string("grid '") + key + "' must be an array");
    for (const auto& v : doc[key]) {
      if (!v.is_number()) throw bcm::DataError(std::string("grid '") + key + "' holds a non-number");
      target->push_back(v.get<double>());
    }
  }
  for (const auto& [key, _] : doc.items())
    if (key != "q" && key != "lambda" && key != "c") throw bcm::DataError("unknown grid key '" + key + "'");
  return grid;
}

int cmd_sweep(const Globals& g, const fs::path& data_path, const DataOptions& data_options, const HyperOptions& ho,
              const ChainOptions& co, const fs::path& grid_path, std::size_t folds, const fs::path& out) {
  const auto loaded = load(data_path, data_options);
  warn(loaded.warnings);
  const auto grid = read_grid(grid_path);
  const auto rows = bcm::sensitivity_sweep(loaded.data, ho.get(), grid, co.get(g.seed), folds);
  bcm::write_file_atomic(out, bcm::sweep_to_csv(rows));
  info(g, "wrote " + std::to_string(rows.size()) + " grid points to " + out.string());
  return kOk;
}

int cmd_oracle(const Globals& g, std::size_t instances) {
  const auto r = bcm::oracle::run_suite(instances, g.seed);
  std::cout << "instances " << r.instances << "\n"
            << "cond_z max relative error " << r.cond_z << "\n"
            << "cond_p max relative error " << r.cond_p << "\n"
            << "cond_omega max relative error (enumeration) " << r.cond_omega_enum << "\n"
            << "cond_omega max absolute error (quadrature) " << r.cond_omega_quad << "\n"
            << "log-score max absolute error " << r.log_score << "\n"
            << "pi max absolute error " << r.pi << "\n"
            << (r.passed() ? "PASS" : "FAIL") << "\n";
  return r.passed() ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bcm: prototype and subspace clustering of discrete data"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_flag("--verbose,-v", globals.verbose, "Progress messages on stderr");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset with planted structure");
  std::string preset = "smiley";
  std::size_t observations = 240;
  fs::path gen_out;
  std::optional<fs::path> truth_out;
  generate->add_option("--preset", preset, "Dataset preset")->capture_default_str();
  generate->add_option("--observations,-N", observations, "Number of observations")->capture_default_str();
  generate->add_option("--out", gen_out, "Output CSV")->required();
  generate->add_option("--truth", truth_out, "Output JSON of the planted latents");

  // fit
  auto* fit = app.add_subcommand("fit", "Run the collapsed Gibbs sampler and save the model");
  fs::path fit_data, fit_out;
  DataOptions fit_data_options;
  HyperOptions fit_hyper;
  ChainOptions fit_chain;
  fit->add_option("data", fit_data, "Dataset CSV (or text corpus with --text)")->required();
  fit->add_option("--out", fit_out, "Output model JSON")->required();
  fit_data_options.add_to(*fit);
  fit_hyper.add_to(*fit);
  fit_chain.add_to(*fit);

  // explain
  auto* explain = app.add_subcommand("explain", "Report prototypes, subspaces and mixture weights");
  fs::path ex_model, ex_data;
  DataOptions ex_data_options;
  std::string format = "markdown";
  std::size_t grid_width = 0;
  std::optional<fs::path> pgm_dir, ex_out;
  explain->add_option("model", ex_model, "Model JSON")->required();
  explain->add_option("data", ex_data, "Dataset the model was fitted on")->required();
  explain->add_option("--format", format, "json | markdown")->capture_default_str();
  explain->add_option("--grid-width", grid_width, "Also draw subspace masks as a grid of this width");
  explain->add_option("--pgm", pgm_dir, "Directory for one PGM mask per cluster (needs --grid-width)");
  explain->add_option("--out", ex_out, "Write the report here instead of stdout");
  explain->add_flag("--text", ex_data_options.text, "Input is a text corpus");
  explain->add_flag("--labelled", ex_data_options.labelled, "Text lines are 'label<TAB>text'");
  explain->add_option("--terms", ex_data_options.terms, "Vocabulary size for text input");

  // eval
  auto* eval = app.add_subcommand("eval", "Clustering and classifier accuracy against labels");
  fs::path ev_model, ev_data;
  DataOptions ev_data_options;
  std::size_t folds = 5;
  std::optional<fs::path> ev_out;
  eval->add_option("model", ev_model, "Model JSON")->required();
  eval->add_option("data", ev_data, "Dataset the model was fitted on")->required();
  auto* labels_opt = eval->add_option("--labels,--label-col", ev_data_options.label_column, "Label column");
  eval->add_option("--folds", folds, "Cross-validation folds")->capture_default_str();
  eval->add_option("--out", ev_out, "Write the report here instead of stdout");
  eval->add_flag("--text", ev_data_options.text, "Input is a text corpus");
  eval->add_flag("--labelled", ev_data_options.labelled, "Text lines are 'label<TAB>text'");
  eval->add_option("--terms", ev_data_options.terms, "Vocabulary size for text input");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Fit over a grid of q, lambda and c");
  fs::path sw_data, sw_grid, sw_out;
  DataOptions sw_data_options;
  HyperOptions sw_hyper;
  ChainOptions sw_chain;
  std::size_t sw_folds = 5;
  sweep->add_option("data", sw_data, "Dataset CSV")->required();
  sweep->add_option("--grid", sw_grid, "Grid JSON: {\"q\": [...], \"lambda\": [...], \"c\": [...]}")->required();
  sweep->add_option("--out", sw_out, "Output CSV")->required();
  sweep->add_option("--folds", sw_folds, "Cross-validation folds")->capture_default_str();
  sw_data_options.add_to(*sweep);
  sw_hyper.add_to(*sweep);
  sw_chain.add_to(*sweep);

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Compare conditionals with exhaustive enumeration");
  std::size_t instances = 200;
  oracle->add_option("--instances", instances, "Random tiny instances")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*generate) return cmd_generate(globals, preset, observations, gen_out, truth_out);
    if (*fit) return cmd_fit(globals, fit_data, fit_data_options, fit_hyper, fit_chain, fit_out);
    if (*explain) return cmd_explain(globals, ex_model, ex_data, ex_data_options, format, grid_width, pgm_dir, ex_out);
    if (*eval) return cmd_eval(globals, ev_model, ev_data, ev_data_options, labels_opt->count() > 0, folds, ev_out);
    if (*sweep) return cmd_sweep(globals, sw_data, sw_data_options, sw_hyper, sw_chain, sw_grid, sw_folds, sw_out);
    if (*oracle) return cmd_oracle(globals, instances);
  } catch (const bcm::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const bcm::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const bcm::EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kData;
  } catch (const bcm::StructuralError& e) {
    std::cerr << "model does not fit the data: " << e.what() << "\n";
    return kData;
  } catch (const bcm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
