#include <benchmark/benchmark.h>

#include "qthermo/estimation.hpp"
#include "qthermo/experiment.hpp"
#include "qthermo/fisher.hpp"
#include "qthermo/lowtemp.hpp"
#include "qthermo/rng.hpp"

using namespace qthermo;

namespace {

Spectrum ladder(int levels) {
  std::vector<Level> lv;
  for (int n = 0; n < levels; ++n) lv.push_back({0.37 * n + 0.01 * n * n, static_cast<std::uint32_t>(n % 3 + 1)});
  return make_spectrum(lv);
}

void BM_GibbsState(benchmark::State& state) {
  const Spectrum s = ladder(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gibbs_state(s, 0.8));
}
BENCHMARK(BM_GibbsState)->Arg(2)->Arg(8)->Arg(64);

void BM_FisherReport(benchmark::State& state) {
  const Spectrum s = ladder(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fisher_report(s, 0.8));
}
BENCHMARK(BM_FisherReport)->Arg(2)->Arg(8)->Arg(64);

void BM_MinimizeThreeLevel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(minimize_three_level());
}
BENCHMARK(BM_MinimizeThreeLevel);

void BM_DrawSample(benchmark::State& state) {
  const Spectrum s = ladder(8);
  TrialRng rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(draw_sample(s, 0.8, static_cast<std::uint64_t>(state.range(0)), rng));
}
BENCHMARK(BM_DrawSample)->Arg(100)->Arg(1000);

void BM_Mle(benchmark::State& state) {
  const Spectrum s = make_spectrum({{0.0, 1}, {1.0, 1}});
  const SampleSet sample = make_sample_set(s, {731, 269});
  for (auto _ : state) benchmark::DoNotOptimize(mle_temperature(s, sample));
}
BENCHMARK(BM_Mle);

void BM_Experiment(benchmark::State& state) {
  ExperimentConfig cfg{make_spectrum({{0.0, 1}, {1.0, 1}})};
  cfg.true_temperature = 1.0 / 2.4;
  cfg.shots_per_trial = 1000;
  cfg.trials = 1000;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}
BENCHMARK(BM_Experiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
