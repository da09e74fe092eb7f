#include <gtest/gtest.h>

#include "bcm/error.hpp"
#include "bcm/random.hpp"
#include "bcm/state.hpp"
#include "test_util.hpp"

namespace bcm {
namespace {

TEST(CountTables, RebuildSmallExample) {
  const auto data = testing::make_dataset({2, 2}, {{0, 1}, {0, 0}, {1, 1}});
  const auto state = testing::make_state(2, {{0, 1}, {0, 0}, {1, 1}}, {0, 2}, {{1, 0}, {0, 1}});
  const auto counts = CountTables::rebuild(data, state);
  EXPECT_EQ(counts.outcome_count(0, 0, 0), 2u);
  EXPECT_EQ(counts.outcome_count(0, 0, 1), 0u);
  EXPECT_EQ(counts.outcome_count(1, 0, 1), 1u);
  EXPECT_EQ(counts.outcome_count(0, 1, 0), 1u);
  EXPECT_EQ(counts.outcome_count(1, 1, 1), 2u);
  EXPECT_EQ(counts.feature_total(0, 0), 2u);
  EXPECT_EQ(counts.feature_total(1, 1), 2u);
  EXPECT_EQ(counts.observation_count(0, 0), 1u);
  EXPECT_EQ(counts.observation_count(0, 1), 2u);
  EXPECT_EQ(counts.observation_count(1, 2), 2u);
  EXPECT_EQ(counts.cluster_total(0) + counts.cluster_total(1), 6u);
}

TEST(CountTables, IncrementalReplayMatchesRebuild) {
  Rng rng = make_rng(11);
  const std::vector<std::size_t> card{3, 1, 4, 2};
  std::vector<std::vector<Outcome>> rows(7, std::vector<Outcome>(card.size()));
  for (auto& r : rows)
    for (std::size_t j = 0; j < card.size(); ++j) r[j] = static_cast<Outcome>(uniform_index(card[j], rng));
  const auto data = testing::make_dataset(card, rows);
  ModelState state(3, 7, card.size());
  auto counts = CountTables::rebuild(data, state);
  for (int step = 0; step < 2000; ++step) {
    const std::size_t i = uniform_index(7, rng);
    const std::size_t j = uniform_index(card.size(), rng);
    const auto s_new = static_cast<std::uint32_t>(uniform_index(3, rng));
    counts.remove(state.assignment(i, j), i, j, data.at(i, j));
    state.set_assignment(i, j, s_new);
    counts.add(s_new, i, j, data.at(i, j));
  }
  EXPECT_EQ(counts, CountTables::rebuild(data, state));
}

TEST(CountTables, RejectsMismatchedState) {
  const auto data = testing::make_dataset({2}, {{0}, {1}});
  EXPECT_THROW(CountTables::rebuild(data, ModelState(2, 3, 1)), StructuralError);
  auto bad = ModelState(2, 2, 1);
  bad.set_assignment(0, 0, 5);
  EXPECT_THROW(CountTables::rebuild(data, bad), StructuralError);
}

TEST(ModelState, ValidateCatchesOutOfRange) {
  auto state = testing::make_state(2, {{0}, {1}}, {0, 1}, {{1}, {0}});
  EXPECT_NO_THROW(state.validate(2, 1, 2));
  EXPECT_THROW(state.validate(3, 1, 2), StructuralError);
  EXPECT_THROW(state.validate(2, 1, 1), StructuralError);
  state.set_assignment(1, 0, 2);
  EXPECT_THROW(state.validate(2, 1, 2), StructuralError);
}

TEST(ModelState, PermutedRelabelsEverything) {
  const auto state = testing::make_state(3, {{0, 1}, {2, 2}}, {1, 0, 1}, {{1, 0}, {0, 0}, {0, 1}});
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto p = state.permuted(perm);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(p.prototype(k), state.prototype(perm[k]));
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(p.in_subspace(k, j), state.in_subspace(perm[k], j));
  }
  EXPECT_EQ(p.assignment(0, 0), 1u);  // old 0 is new 1
  EXPECT_EQ(p.assignment(1, 0), 0u);  // old 2 is new 0
  EXPECT_DOUBLE_EQ(p.omega_density(), state.omega_density());
}

}  // namespace
}  // namespace bcm
