#include "bcm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bcm/error.hpp"

namespace bcm {

namespace {

std::optional<double> parse_number(const std::string& s) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

std::size_t FeatureSpace::add_feature(std::string name, std::vector<std::string> outcomes) {
  if (outcomes.empty()) throw DataError("feature '" + name + "' has an empty vocabulary");
  if (by_name_.contains(name)) throw DataError("duplicate feature name '" + name + "'");
  Feature f;
  f.name = std::move(name);
  for (std::size_t v = 0; v < outcomes.size(); ++v) {
    if (!f.index.emplace(outcomes[v], static_cast<Outcome>(v)).second)
      throw DataError("feature '" + f.name + "' has duplicate outcome '" + outcomes[v] + "'");
  }
  f.outcomes = std::move(outcomes);
  const std::size_t j = features_.size();
  by_name_.emplace(f.name, j);
  offsets_.push_back(total_);
  total_ += f.outcomes.size();
  features_.push_back(std::move(f));
  return j;
}

std::optional<Outcome> FeatureSpace::find_outcome(std::size_t j, const std::string& label) const {
  const auto& index = features_.at(j).index;
  auto it = index.find(label);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FeatureSpace::find_feature(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureSpace::max_cardinality() const {
  std::size_t m = 0;
  for (const auto& f : features_) m = std::max(m, f.outcomes.size());
  return m;
}

std::optional<std::vector<double>> FeatureSpace::numeric_values(std::size_t j) const {
  std::vector<double> values;
  for (const auto& label : features_.at(j).outcomes) {
    auto v = parse_number(label);
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  return values;
}

bool FeatureSpace::operator==(const FeatureSpace& other) const {
  if (features_.size() != other.features_.size()) return false;
  for (std::size_t j = 0; j < features_.size(); ++j) {
    if (features_[j].name != other.features_[j].name || features_[j].outcomes != other.features_[j].outcomes)
      return false;
  }
  return true;
}

Dataset::Dataset(FeatureSpace features, std::size_t observations, std::vector<Outcome> cells)
    : features_(std::move(features)), rows_(observations), cells_(std::move(cells)) {
  if (rows_ == 0) throw DataError("dataset has no observations");
  if (features_.empty()) throw DataError("dataset has no features");
  const std::size_t p = features_.size();
  if (cells_.size() != rows_ * p) throw DataError("cell count does not equal N * P");
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (cells_[i * p + j] >= features_.cardinality(j))
        throw DataError("row " + std::to_string(i) + ", feature '" + features_.name(j) +
                        "': outcome index out of range");
    }
  }
  ids_.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) ids_.push_back(std::to_string(i));
}

void Dataset::set(std::size_t i, std::size_t j, Outcome v) {
  if (i >= rows_ || j >= features_.size() || v >= features_.cardinality(j))
    throw StructuralError("Dataset::set index out of range");
  cells_[i * features_.size() + j] = v;
}

void Dataset::set_labels(LabelSet labels) {
  if (labels.ids.size() != rows_) throw DataError("label count does not match observation count");
  for (auto id : labels.ids)
    if (id >= labels.names.size()) throw DataError("label id out of range");
  labels_ = std::move(labels);
}

void Dataset::set_ids(std::vector<std::string> ids) {
  if (ids.size() != rows_) throw DataError("id count does not match observation count");
  ids_ = std::move(ids);
}

bool Dataset::operator==(const Dataset& other) const {
  return rows_ == other.rows_ && features_ == other.features_ && cells_ == other.cells_ &&
         labels_ == other.labels_ && ids_ == other.ids_;
}

}  // namespace bcm
