#include <gtest/gtest.h>

#include "bcm/dataset.hpp"
#include "bcm/error.hpp"
#include "test_util.hpp"

namespace bcm {
namespace {

TEST(FeatureSpace, PerFeatureVocabularies) {
  FeatureSpace fs;
  fs.add_feature("color", {"red", "blue", "yellow"});
  fs.add_feature("pixel", {"0", "1", "2", "3", "4", "5", "6"});
  EXPECT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs.cardinality(0), 3u);
  EXPECT_EQ(fs.cardinality(1), 7u);
  EXPECT_EQ(fs.offset(1), 3u);
  EXPECT_EQ(fs.total_outcomes(), 10u);
  EXPECT_EQ(fs.find_outcome(0, "blue"), Outcome{1});
  EXPECT_FALSE(fs.find_outcome(0, "green"));
  EXPECT_EQ(fs.label(1, 6), "6");
}

TEST(FeatureSpace, RejectsEmptyOrDuplicateVocabulary) {
  FeatureSpace fs;
  EXPECT_THROW(fs.add_feature("a", {}), DataError);
  EXPECT_THROW(fs.add_feature("a", {"x", "x"}), DataError);
  fs.add_feature("a", {"x"});
  EXPECT_THROW(fs.add_feature("a", {"y"}), DataError);
}

TEST(FeatureSpace, NumericValuesOnlyForNumericLabels) {
  FeatureSpace fs;
  fs.add_feature("n", {"0", "1.5", "-2"});
  fs.add_feature("c", {"red", "1"});
  ASSERT_TRUE(fs.numeric_values(0));
  EXPECT_DOUBLE_EQ((*fs.numeric_values(0))[1], 1.5);
  EXPECT_FALSE(fs.numeric_values(1));
}

TEST(Dataset, ValidatesShapeAndRange) {
  const auto fs = testing::numeric_space({2, 3});
  EXPECT_THROW(Dataset(fs, 0, {}), DataError);
  EXPECT_THROW(Dataset(fs, 1, {0}), DataError);
  EXPECT_THROW(Dataset(fs, 1, {2, 0}), DataError);
  Dataset d(fs, 2, {0, 2, 1, 1});
  EXPECT_EQ(d.at(0, 1), 2u);
  EXPECT_EQ(d.row(1)[0], 1u);
  EXPECT_EQ(d.id(1), "1");
  EXPECT_THROW(d.set(0, 0, 2), StructuralError);
}

TEST(Dataset, LabelsMustCoverEveryRow) {
  auto d = testing::make_dataset({2}, {{0}, {1}});
  EXPECT_THROW(d.set_labels(testing::make_labels({"a"})), DataError);
  d.set_labels(testing::make_labels({"a", "b"}));
  EXPECT_EQ(d.labels()->num_classes(), 2u);
}

}  // namespace
}  // namespace bcm
