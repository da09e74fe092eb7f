#include "bcm/serialize.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bcm/error.hpp"

namespace bcm {

using nlohmann::json;

namespace {

json hyper_json(const Hyperparams& h) {
  json j = {{"clusters", h.clusters}, {"alpha", h.alpha}, {"q", h.q}, {"lambda", h.lambda}, {"c", h.c}};
  if (h.similarity.kind == Similarity::Kind::thresholded) {
    j["similarity"] = "thresholded";
    j["epsilon"] = h.similarity.epsilon;
  } else {
    j["similarity"] = "exact";
  }
  return j;
}

Hyperparams hyper_from(const json& j) {
  Hyperparams h;
  h.clusters = j.at("clusters").get<std::size_t>();
  h.alpha = j.at("alpha").get<double>();
  h.q = j.at("q").get<double>();
  h.lambda = j.at("lambda").get<double>();
  h.c = j.at("c").get<double>();
  const auto sim = j.value("similarity", std::string("exact"));
  if (sim == "thresholded")
    h.similarity = Similarity::threshold(j.at("epsilon").get<double>());
  else if (sim != "exact")
    throw DataError("unknown similarity '" + sim + "'");
  return h;
}

json assignments_json(const ModelState& state) {
  json z = json::array();
  for (std::size_t i = 0; i < state.num_observations(); ++i) {
    std::vector<std::uint32_t> row(state.num_features());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = state.assignment(i, j);
    z.push_back(row);
  }
  return z;
}

json omega_json(const ModelState& state) {
  json omega = json::array();
  for (std::size_t s = 0; s < state.num_clusters(); ++s) {
    auto sub = state.subspace(s);
    omega.push_back(std::vector<int>(sub.begin(), sub.end()));
  }
  return omega;
}

ModelState state_from(const json& doc, std::size_t clusters, std::size_t observations, std::size_t features) {
  ModelState state(clusters, observations, features);
  const auto& z = doc.at("z");
  if (z.size() != observations) throw DataError("z has " + std::to_string(z.size()) + " rows, expected N");
  for (std::size_t i = 0; i < observations; ++i) {
    if (z[i].size() != features) throw DataError("z row length differs from P");
    for (std::size_t j = 0; j < features; ++j) state.set_assignment(i, j, z[i][j].get<std::uint32_t>());
  }
  const auto& protos = doc.at("prototypes");
  if (protos.size() != clusters) throw DataError("prototype count differs from S");
  for (std::size_t s = 0; s < clusters; ++s) state.set_prototype(s, protos[s].at("row").get<std::size_t>());
  const auto& omega = doc.at("omega");
  if (omega.size() != clusters) throw DataError("omega row count differs from S");
  for (std::size_t s = 0; s < clusters; ++s) {
    if (omega[s].size() != features) throw DataError("omega row length differs from P");
    for (std::size_t j = 0; j < features; ++j) {
      const int w = omega[s][j].get<int>();
      if (w != 0 && w != 1) throw DataError("omega entries must be 0 or 1");
      state.set_subspace(s, j, w == 1);
    }
  }
  return state;
}

}  // namespace

std::string to_string(PrototypeUpdate update) { return update == PrototypeUpdate::argmax ? "argmax" : "sample"; }

PrototypeUpdate parse_prototype_update(std::string_view text) {
  if (text == "sample") return PrototypeUpdate::sample;
  if (text == "argmax") return PrototypeUpdate::argmax;
  throw ConfigError("prototype update must be 'sample' or 'argmax'");
}

std::string model_to_json(const FittedModel& m) {
  json doc;
  doc["format"] = "bcm-model";
  doc["version"] = 1;
  doc["hyperparams"] = hyper_json(m.hyper);
  doc["chain"] = {{"iterations", m.iterations},
                  {"seed", m.seed},
                  {"prototype_update", to_string(m.prototype_update)},
                  {"chains", m.chains}};
  doc["ingest"] = {{"bins", m.bins ? json(*m.bins) : json(nullptr)},
                   {"id_column", m.id_column},
                   {"label_column", m.label_column},
                   {"drop", m.dropped_columns}};
  doc["observations"] = m.observations;
  json features = json::array();
  for (std::size_t j = 0; j < m.features.size(); ++j) {
    auto outcomes = m.features.outcomes(j);
    features.push_back({{"name", m.features.name(j)},
                        {"outcomes", std::vector<std::string>(outcomes.begin(), outcomes.end())}});
  }
  doc["features"] = features;
  doc["z"] = assignments_json(m.state);
  json protos = json::array();
  for (std::size_t s = 0; s < m.state.num_clusters(); ++s) {
    json p = {{"row", m.state.prototype(s)}};
    if (s < m.prototype_ids.size()) p["id"] = m.prototype_ids[s];
    protos.push_back(p);
  }
  doc["prototypes"] = protos;
  doc["omega"] = omega_json(m.state);
  doc["log_score"] = m.log_score;
  doc["trace_file"] = m.trace_file;
  if (m.averaged_pi) doc["averaged_pi"] = *m.averaged_pi;
  return doc.dump(1) + "\n";
}

FittedModel model_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string{}) != "bcm-model") throw DataError("not a bcm model file");
    FittedModel m;
    m.hyper = hyper_from(doc.at("hyperparams"));
    const auto& chain = doc.at("chain");
    m.iterations = chain.at("iterations").get<std::size_t>();
    m.seed = chain.at("seed").get<std::uint64_t>();
    m.prototype_update = parse_prototype_update(chain.at("prototype_update").get<std::string>());
    m.chains = chain.value("chains", std::size_t{1});
    const auto& ingest = doc.at("ingest");
    if (!ingest.at("bins").is_null()) m.bins = ingest.at("bins").get<std::size_t>();
    m.id_column = ingest.value("id_column", std::string("id"));
    m.label_column = ingest.value("label_column", std::string("label"));
    m.dropped_columns = ingest.value("drop", std::vector<std::string>{});
    m.observations = doc.at("observations").get<std::size_t>();
    for (const auto& f : doc.at("features"))
      m.features.add_feature(f.at("name").get<std::string>(), f.at("outcomes").get<std::vector<std::string>>());
    m.state = state_from(doc, m.hyper.clusters, m.observations, m.features.size());
    for (const auto& p : doc.at("prototypes")) m.prototype_ids.push_back(p.value("id", std::string{}));
    m.log_score = doc.at("log_score").get<double>();
    m.trace_file = doc.value("trace_file", std::string{});
    if (doc.contains("averaged_pi")) m.averaged_pi = doc.at("averaged_pi").get<std::vector<std::vector<double>>>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model JSON: ") + e.what());
  }
}

std::string trace_to_csv(const ChainTrace& trace) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "iteration,log_score,omega_density,accuracy,prototypes\n";
  for (const auto& e : trace.entries) {
    out << e.iteration << ',' << e.log_score << ',' << e.omega_density << ',';
    if (e.accuracy) out << *e.accuracy;
    out << ',';
    for (std::size_t k = 0; k < e.prototypes.size(); ++k) out << (k ? " " : "") << e.prototypes[k];
    out << '\n';
  }
  return out.str();
}

std::string truth_to_json(const ModelState& truth, const Dataset& data) {
  json doc;
  doc["format"] = "bcm-truth";
  doc["version"] = 1;
  doc["clusters"] = truth.num_clusters();
  doc["observations"] = truth.num_observations();
  doc["features"] = truth.num_features();
  doc["z"] = assignments_json(truth);
  json protos = json::array();
  for (std::size_t s = 0; s < truth.num_clusters(); ++s)
    protos.push_back({{"row", truth.prototype(s)}, {"id", data.id(truth.prototype(s))}});
  doc["prototypes"] = protos;
  doc["omega"] = omega_json(truth);
  if (data.has_labels()) {
    std::vector<std::string> labels;
    for (auto id : data.labels()->ids) labels.push_back(data.labels()->names[id]);
    doc["labels"] = labels;
  }
  return doc.dump(1) + "\n";
}

ModelState truth_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string{}) != "bcm-truth") throw DataError("not a bcm truth file");
    return state_from(doc, doc.at("clusters").get<std::size_t>(), doc.at("observations").get<std::size_t>(),
                      doc.at("features").get<std::size_t>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed truth JSON: ") + e.what());
  }
}

std::string explanation_to_json(const Explanation& explanation, const Dataset& data) {
  const auto& features = data.features();
  json clusters = json::array();
  for (const auto& c : explanation.clusters) {
    json entry = {{"cluster", c.cluster},
                  {"empty", c.empty},
                  {"assigned_cells", c.assigned_cells},
                  {"dominant_observations", c.dominant_observations},
                  {"mask", std::vector<int>(c.subspace.begin(), c.subspace.end())}};
    std::vector<std::string> names;
    for (auto j : c.subspace_features) names.push_back(features.name(j));
    entry["subspace"] = names;
    if (!c.empty) {
      json values = json::object();
      json sub_values = json::object();
      for (std::size_t j = 0; j < features.size(); ++j) {
        values[features.name(j)] = features.label(j, c.prototype_values[j]);
        if (c.subspace[j]) sub_values[features.name(j)] = features.label(j, c.prototype_values[j]);
      }
      json proto = {{"row", *c.prototype_row}, {"id", c.prototype_id}, {"values", values}};
      if (data.has_labels() && *c.prototype_row < data.num_observations())
        proto["label"] = data.labels()->names[data.labels()->ids[*c.prototype_row]];
      entry["prototype"] = proto;
      entry["subspace_values"] = sub_values;
    }
    json phi = json::object();
    for (std::size_t j = 0; j < features.size(); ++j) phi[features.name(j)] = explanation.phi[c.cluster][j];
    entry["phi"] = phi;
    clusters.push_back(entry);
  }
  json doc = {{"format", "bcm-explanation"}, {"version", 1}, {"clusters", clusters}, {"pi", explanation.pi}};
  return doc.dump(1) + "\n";
}

std::string eval_report_to_json(const EvalReport& r) {
  json purity = json::array();
  for (const auto& p : r.purity) purity.push_back(p ? json(*p) : json(nullptr));
  json doc = {{"format", "bcm-eval"},
              {"version", 1},
              {"unsupervised_accuracy", r.unsupervised_accuracy},
              {"best_permutation_accuracy", r.best_permutation_accuracy},
              {"classifier", {{"mean", r.classifier_mean}, {"std", r.classifier_std}, {"train", r.classifier_train_accuracy}}},
              {"purity", purity},
              {"classes", r.class_names},
              {"confusion", r.confusion},
              {"warnings", r.warnings}};
  return doc.dump(1) + "\n";
}

}  // namespace bcm
