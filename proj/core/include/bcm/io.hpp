#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcm/dataset.hpp"

namespace bcm {

/// RFC 4180-style CSV: comma separated, double-quote escaping, CRLF or LF.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
std::string csv_escape(std::string_view field);

enum class ColumnRole { feature, id, label, drop };

/// Feature name -> ordered outcome labels.
using VocabMap = std::map<std::string, std::vector<std::string>>;

struct IngestSpec {
  std::filesystem::path source;
  std::string id_column = "id";
  std::string label_column = "label";
  /// Explicit roles; columns not listed are features unless they are the
  /// id or label column.
  std::map<std::string, ColumnRole> roles;
  /// Equal-width bin count applied to every feature column.
  std::optional<std::size_t> bins;
  /// Per-column bin counts; override `bins`.
  std::map<std::string, std::size_t> column_bins;
  /// Sidecar vocabulary file pinning outcome order.
  std::optional<std::filesystem::path> vocab_path;
  /// Pinned vocabularies; take precedence over `vocab_path`.
  VocabMap vocab;
};

struct IngestResult {
  Dataset data;
  std::vector<std::string> warnings;
};

/// Reads a CSV dataset. Vocabularies follow pinned orderings when given and
/// first appearance otherwise; binned columns use the labels "0".."k-1".
/// Throws DataError naming the row and column of any bad cell.
IngestResult ingest(const IngestSpec& spec);
IngestResult ingest(std::istream& in, const IngestSpec& spec);

/// Equal-width bins floor(k (u - min) / (max - min + tiny)) clamped to
/// [0, k-1], min and max taken over `values`.
std::vector<std::size_t> equal_width_bins(const std::vector<double>& values, std::size_t k);

/// Lowercased terms. Lines containing commas are split on commas (so
/// multi-word terms survive); otherwise on non-alphanumeric characters.
std::vector<std::string> tokenize(std::string_view text);

/// Binary presence of the `terms` most frequent terms by document frequency
/// (ties broken lexicographically). Truncates with a warning when the corpus
/// has fewer distinct terms.
IngestResult text_to_presence(const std::vector<std::vector<std::string>>& documents, std::size_t terms,
                              const std::optional<std::vector<std::string>>& labels = std::nullopt);

/// One document per line, optionally "label<TAB>text".
IngestResult read_text_corpus(const std::filesystem::path& path, std::size_t terms, bool labelled);

/// Sidecar vocabulary path for a dataset: data.csv -> data.vocab.json.
std::filesystem::path vocab_sidecar(const std::filesystem::path& csv);

std::string dataset_to_csv(const Dataset& data);
std::string vocab_to_json(const FeatureSpace& features);
/// Feature vocabularies plus the class order under `label_column`.
std::string vocab_to_json(const Dataset& data, const std::string& label_column = "label");
VocabMap parse_vocab_json(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace bcm
