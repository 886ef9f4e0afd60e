#include <benchmark/benchmark.h>

#include "cachebandit/runner.hpp"

using namespace cachebandit;

namespace {

void BM_Episode(benchmark::State& state, const char* policy) {
  ExperimentConfig c = default_paper_config();
  c.horizon = 5000;
  const Scenario scenario = build_scenario(c, 0);
  const PolicySpec spec = parse_policy_list(policy, c.policy_defaults).front();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(scenario, spec, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.horizon));
}
BENCHMARK_CAPTURE(BM_Episode, cucb, "cucb")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episode, cucbsc_sqrt, "cucbsc-sqrt")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episode, delta_myopic, "delta-myopic")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Episode, iub, "iub")->Unit(benchmark::kMillisecond);

void BM_Regret(benchmark::State& state) {
  ExperimentConfig c = default_paper_config();
  c.horizon = 5000;
  const Scenario scenario = build_scenario(c, 0);
  const ReferenceInfo ref = regret_reference(scenario);
  const auto trace = run_episode(scenario, parse_policy_list("cucb", {}).front(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        compute_regret(trace, ref.reference, scenario.profile, scenario.catalog, 1.0));
  }
}
BENCHMARK(BM_Regret)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
