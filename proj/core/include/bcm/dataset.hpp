#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bcm {

/// Index of an outcome within one feature's vocabulary.
using Outcome = std::uint32_t;

/// Features and their per-feature outcome vocabularies. Vocabulary sizes may
/// differ across features.
class FeatureSpace {
 public:
  FeatureSpace() = default;

  /// Appends a feature. Throws DataError on an empty vocabulary, a duplicate
  /// outcome label or a duplicate feature name.
  std::size_t add_feature(std::string name, std::vector<std::string> outcomes);

  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }

  const std::string& name(std::size_t j) const { return features_.at(j).name; }
  std::size_t cardinality(std::size_t j) const { return features_.at(j).outcomes.size(); }
  std::span<const std::string> outcomes(std::size_t j) const { return features_.at(j).outcomes; }
  const std::string& label(std::size_t j, Outcome v) const { return features_.at(j).outcomes.at(v); }

  std::optional<Outcome> find_outcome(std::size_t j, const std::string& label) const;
  std::optional<std::size_t> find_feature(const std::string& name) const;

  /// Start of feature j in a flattened [feature][outcome] layout.
  std::size_t offset(std::size_t j) const { return offsets_.at(j); }
  std::size_t total_outcomes() const { return total_; }
  std::size_t max_cardinality() const;

  /// Numeric value of every label of feature j, or nullopt if any label does
  /// not parse as a number.
  std::optional<std::vector<double>> numeric_values(std::size_t j) const;

  bool operator==(const FeatureSpace& other) const;

 private:
  struct Feature {
    std::string name;
    std::vector<std::string> outcomes;
    std::unordered_map<std::string, Outcome> index;
  };
  std::vector<Feature> features_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::size_t total_ = 0;
};

/// Ground-truth classes attached to observations.
struct LabelSet {
  std::vector<std::string> names;  // class id -> name
  std::vector<std::size_t> ids;    // observation -> class id

  std::size_t num_classes() const { return names.size(); }
  bool operator==(const LabelSet&) const = default;
};

/// N observations over a FeatureSpace, stored row-major.
class Dataset {
 public:
  Dataset() = default;
  /// Throws DataError if N == 0, if cells.size() != N * P or if any cell is
  /// outside its feature's vocabulary.
  Dataset(FeatureSpace features, std::size_t observations, std::vector<Outcome> cells);

  const FeatureSpace& features() const { return features_; }
  std::size_t num_observations() const { return rows_; }
  std::size_t num_features() const { return features_.size(); }

  Outcome at(std::size_t i, std::size_t j) const { return cells_[i * features_.size() + j]; }
  std::span<const Outcome> row(std::size_t i) const {
    return {cells_.data() + i * features_.size(), features_.size()};
  }
  std::span<const Outcome> cells() const { return cells_; }

  /// Bounds-checked cell update.
  void set(std::size_t i, std::size_t j, Outcome v);

  const std::optional<LabelSet>& labels() const { return labels_; }
  void set_labels(LabelSet labels);
  bool has_labels() const { return labels_.has_value(); }

  /// Observation ids; defaults to the row number as a string.
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }
  void set_ids(std::vector<std::string> ids);

  bool operator==(const Dataset& other) const;

 private:
  FeatureSpace features_;
  std::size_t rows_ = 0;
  std::vector<Outcome> cells_;
  std::optional<LabelSet> labels_;
  std::vector<std::string> ids_;
};

}  // namespace bcm
