#include "bcm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "bcm/error.hpp"

namespace bcm {

using nlohmann::json;

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char ch;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field_started && field.empty()) {
          quoted = true;
          field_started = true;
        } else {
          field += ch;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (in.peek() == '\n') in.get(ch);
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field += ch;
        field_started = true;
    }
  }
  if (quoted) throw DataError("CSV ends inside a quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::size_t> equal_width_bins(const std::vector<double>& values, std::size_t k) {
  if (k < 2) throw ConfigError("bin count must be >= 2");
  std::vector<std::size_t> out(values.size(), 0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  const double denom = range + std::max(range * 1e-12, std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double b = std::floor(static_cast<double>(k) * (values[i] - *lo) / denom);
    out[i] = static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(k - 1)));
  }
  return out;
}

namespace {

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string cell_ref(std::size_t row, const std::string& column) {
  return "row " + std::to_string(row) + ", column '" + column + "'";
}

ColumnRole role_of(const IngestSpec& spec, const std::string& name) {
  if (auto it = spec.roles.find(name); it != spec.roles.end()) return it->second;
  if (name == spec.id_column) return ColumnRole::id;
  if (name == spec.label_column) return ColumnRole::label;
  return ColumnRole::feature;
}

// Maps raw labels to indices, either against a pinned vocabulary or by first
// appearance.
struct VocabBuilder {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Outcome> index;
  bool pinned = false;

  explicit VocabBuilder(const std::vector<std::string>* pin) {
    if (!pin) return;
    pinned = true;
    for (const auto& l : *pin) {
      if (!index.emplace(l, static_cast<Outcome>(labels.size())).second)
        throw DataError("pinned vocabulary repeats outcome '" + l + "'");
      labels.push_back(l);
    }
  }

  std::optional<Outcome> lookup_or_add(const std::string& label) {
    if (auto it = index.find(label); it != index.end()) return it->second;
    if (pinned) return std::nullopt;
    const auto v = static_cast<Outcome>(labels.size());
    index.emplace(label, v);
    labels.push_back(label);
    return v;
  }
};

}  // namespace

IngestResult ingest(std::istream& in, const IngestSpec& spec) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw DataError("CSV has no header row");
  const auto& header = rows[0];
  const std::size_t n = rows.size() - 1;
  if (n == 0) throw DataError("CSV has no data rows");
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r].size() != header.size())
      throw DataError("row " + std::to_string(r) + ": expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(rows[r].size()));
  {
    std::set<std::string> seen;
    for (const auto& h : header)
      if (!seen.insert(h).second) throw DataError("duplicate column '" + h + "'");
  }

  VocabMap pins;
  if (spec.vocab_path) pins = parse_vocab_json(read_file(*spec.vocab_path));
  for (const auto& [k, v] : spec.vocab) pins[k] = v;
  auto pin_for = [&](const std::string& name) -> const std::vector<std::string>* {
    auto it = pins.find(name);
    return it == pins.end() ? nullptr : &it->second;
  };

  IngestResult result;
  FeatureSpace features;
  std::vector<std::vector<Outcome>> columns;
  std::optional<std::size_t> id_col, label_col;

  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    const ColumnRole role = role_of(spec, name);
    if (role == ColumnRole::drop) continue;
    if (role == ColumnRole::id) {
      id_col = c;
      continue;
    }
    if (role == ColumnRole::label) {
      label_col = c;
      continue;
    }

    std::optional<std::size_t> k = spec.bins;
    if (auto it = spec.column_bins.find(name); it != spec.column_bins.end()) k = it->second;

    std::vector<std::string> raw(n);
    if (k) {
      if (*k < 2) throw ConfigError("column '" + name + "': bin count must be >= 2");
      std::vector<double> values(n);
      for (std::size_t r = 0; r < n; ++r) {
        auto v = parse_double(rows[r + 1][c]);
        if (!v) throw DataError(cell_ref(r + 1, name) + ": '" + rows[r + 1][c] + "' is not a number");
        values[r] = *v;
      }
      const auto bins = equal_width_bins(values, *k);
      const bool constant = *std::max_element(values.begin(), values.end()) ==
                            *std::min_element(values.begin(), values.end());
      for (std::size_t r = 0; r < n; ++r) raw[r] = std::to_string(bins[r]);
      std::vector<std::string> vocab;
      if (const auto* pin = pin_for(name)) {
        vocab = *pin;
      } else if (constant) {
        result.warnings.push_back("column '" + name + "' is constant; single-outcome vocabulary");
        vocab = {"0"};
      } else {
        for (std::size_t b = 0; b < *k; ++b) vocab.push_back(std::to_string(b));
      }
      VocabBuilder builder(&vocab);
      std::vector<Outcome> col(n);
      for (std::size_t r = 0; r < n; ++r) {
        auto v = builder.lookup_or_add(raw[r]);
        if (!v) throw DataError(cell_ref(r + 1, name) + ": bin '" + raw[r] + "' not in pinned vocabulary");
        col[r] = *v;
      }
      features.add_feature(name, builder.labels);
      columns.push_back(std::move(col));
      continue;
    }

    VocabBuilder builder(pin_for(name));
    std::vector<Outcome> col(n);
    for (std::size_t r = 0; r < n; ++r) {
      auto v = builder.lookup_or_add(rows[r + 1][c]);
      if (!v) throw DataError(cell_ref(r + 1, name) + ": outcome '" + rows[r + 1][c] + "' not in pinned vocabulary");
      col[r] = *v;
    }
    features.add_feature(name, builder.labels);
    columns.push_back(std::move(col));
  }

  if (features.empty()) throw DataError("no feature columns");
  const std::size_t p = features.size();
  std::vector<Outcome> cells(n * p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t r = 0; r < n; ++r) cells[r * p + j] = columns[j][r];
  Dataset data(std::move(features), n, std::move(cells));

  if (id_col) {
    std::vector<std::string> ids(n);
    for (std::size_t r = 0; r < n; ++r) ids[r] = rows[r + 1][*id_col];
    data.set_ids(std::move(ids));
  }
  if (label_col) {
    VocabBuilder builder(pin_for(header[*label_col]));
    LabelSet labels;
    for (std::size_t r = 0; r < n; ++r) {
      auto v = builder.lookup_or_add(rows[r + 1][*label_col]);
      if (!v) throw DataError(cell_ref(r + 1, header[*label_col]) + ": label not in pinned vocabulary");
      labels.ids.push_back(*v);
    }
    labels.names = builder.labels;
    data.set_labels(std::move(labels));
  }
  result.data = std::move(data);
  return result;
}

IngestResult ingest(const IngestSpec& spec) {
  std::ifstream in(spec.source, std::ios::binary);
  if (!in) throw DataError("cannot open '" + spec.source.string() + "'");
  IngestSpec effective = spec;
  if (!effective.vocab_path) {
    const auto sidecar = vocab_sidecar(spec.source);
    if (std::filesystem::exists(sidecar)) effective.vocab_path = sidecar;
  }
  return ingest(in, effective);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  auto lower = [](std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view piece = text.substr(start, end - start);
      while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) piece.remove_prefix(1);
      while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) piece.remove_suffix(1);
      if (!piece.empty()) out.push_back(lower(std::string(piece)));
      start = end + 1;
    }
    return out;
  }
  std::string cur;
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(lower(std::move(cur)));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(lower(std::move(cur)));
  return out;
}

IngestResult text_to_presence(const std::vector<std::vector<std::string>>& documents, std::size_t terms,
                              const std::optional<std::vector<std::string>>& labels) {
  if (terms == 0) throw ConfigError("term count must be >= 1");
  if (documents.empty()) throw DataError("corpus is empty");
  if (labels && labels->size() != documents.size()) throw DataError("one label per document is required");

  std::vector<std::set<std::string>> sets;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    sets.emplace_back(doc.begin(), doc.end());
    for (const auto& t : sets.back()) ++df[t];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  IngestResult result;
  if (ranked.size() < terms) {
    result.warnings.push_back("corpus has " + std::to_string(ranked.size()) + " distinct terms; truncating from " +
                              std::to_string(terms));
    terms = ranked.size();
  }
  if (terms == 0) throw DataError("corpus has no terms");
  FeatureSpace features;
  for (std::size_t t = 0; t < terms; ++t) features.add_feature(ranked[t].first, {"0", "1"});
  std::vector<Outcome> cells(documents.size() * terms, 0);
  for (std::size_t i = 0; i < documents.size(); ++i)
    for (std::size_t t = 0; t < terms; ++t) cells[i * terms + t] = sets[i].contains(ranked[t].first) ? 1 : 0;
  Dataset data(std::move(features), documents.size(), std::move(cells));

  if (labels) {
    VocabBuilder builder(nullptr);
    LabelSet set;
    for (const auto& l : *labels) set.ids.push_back(*builder.lookup_or_add(l));
    set.names = builder.labels;
    data.set_labels(std::move(set));
  }
  result.data = std::move(data);
  return result;
}

IngestResult read_text_corpus(const std::filesystem::path& path, std::size_t terms, bool labelled) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view body = line;
    if (labelled) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw DataError("line " + std::to_string(line_no) + ": missing label<TAB>");
      labels.push_back(line.substr(0, tab));
      body = std::string_view(line).substr(tab + 1);
    }
    docs.push_back(tokenize(body));
  }
  return text_to_presence(docs, terms, labelled ? std::optional(labels) : std::nullopt);
}

std::filesystem::path vocab_sidecar(const std::filesystem::path& csv) {
  auto out = csv;
  out.replace_extension(".vocab.json");
  return out;
}

std::string dataset_to_csv(const Dataset& data) {
  const auto& features = data.features();
  std::ostringstream out;
  out << "id";
  if (data.has_labels()) out << ",label";
  for (std::size_t j = 0; j < features.size(); ++j) out << ',' << csv_escape(features.name(j));
  out << '\n';
  for (std::size_t i = 0; i < data.num_observations(); ++i) {
    out << csv_escape(data.id(i));
    if (data.has_labels()) out << ',' << csv_escape(data.labels()->names[data.labels()->ids[i]]);
    for (std::size_t j = 0; j < features.size(); ++j) out << ',' << csv_escape(features.label(j, data.at(i, j)));
    out << '\n';
  }
  return out.str();
}

std::string vocab_to_json(const FeatureSpace& features) {
  json doc = json::object();
  for (std::size_t j = 0; j < features.size(); ++j) {
    auto outcomes = features.outcomes(j);
    doc[features.name(j)] = std::vector<std::string>(outcomes.begin(), outcomes.end());
  }
  return doc.dump(2) + "\n";
}

std::string vocab_to_json(const Dataset& data, const std::string& label_column) {
  json doc = json::parse(vocab_to_json(data.features()));
  if (data.has_labels()) doc[label_column] = data.labels()->names;
  return doc.dump(2) + "\n";
}

VocabMap parse_vocab_json(std::string_view text) {
  VocabMap out;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw DataError("vocabulary file must be a JSON object");
    for (const auto& [name, outcomes] : doc.items()) out[name] = outcomes.get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed vocabulary JSON: ") + e.what());
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw DataError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

}  // namespace bcm
