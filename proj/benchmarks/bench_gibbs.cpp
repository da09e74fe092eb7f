#include <benchmark/benchmark.h>

#include "bcm/generate.hpp"
#include "bcm/gibbs.hpp"
#include "bcm/math.hpp"

namespace {

void BM_SweepSmiley(benchmark::State& st) {
  const auto smiley = bcm::make_smiley_dataset(1, {static_cast<std::size_t>(st.range(0))});
  const bcm::Posterior post(smiley.data, bcm::SmileyOptions{}.hyper);
  bcm::Rng rng = bcm::make_rng(1);
  auto state = bcm::random_state(post, rng);
  auto counts = bcm::CountTables::rebuild(smiley.data, state);
  for (auto _ : st) bcm::sweep(post, state, counts, rng);
  st.SetItemsProcessed(st.iterations() * st.range(0) * 6);
}
BENCHMARK(BM_SweepSmiley)->Arg(240)->Arg(2400);

void BM_SweepWide(benchmark::State& st) {
  // Digit-like shape: 256 features, 7 outcomes, 10 clusters.
  bcm::FeatureSpace fs;
  for (int j = 0; j < 256; ++j) fs.add_feature("p" + std::to_string(j), {"0", "1", "2", "3", "4", "5", "6"});
  const auto pool = bcm::uniform_pool(fs, 10, 2);
  const bcm::Hyperparams h{10, 0.01, 0.8, 1.0, 50.0, {}};
  const auto draw = bcm::sample_prior(fs, static_cast<std::size_t>(st.range(0)), h, pool, 3);
  const bcm::Posterior post(draw.data, h);
  bcm::Rng rng = bcm::make_rng(4);
  auto state = bcm::random_state(post, rng);
  auto counts = bcm::CountTables::rebuild(draw.data, state);
  for (auto _ : st) bcm::sweep(post, state, counts, rng);
  st.SetItemsProcessed(st.iterations() * st.range(0) * 256);
}
BENCHMARK(BM_SweepWide)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_LogBetaRatio(benchmark::State& st) {
  const std::vector<double> g{1.0, 51.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const std::vector<std::uint32_t> n{3, 40, 0, 2, 1, 0, 5};
  for (auto _ : st) benchmark::DoNotOptimize(bcm::log_beta_ratio(g, n));
}
BENCHMARK(BM_LogBetaRatio);

}  // namespace

BENCHMARK_MAIN();
