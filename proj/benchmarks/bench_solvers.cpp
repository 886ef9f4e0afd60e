#include <benchmark/benchmark.h>

#include "cachebandit/config.hpp"
#include "cachebandit/spo.hpp"

using namespace cachebandit;

namespace {

struct PaperInstance {
  Catalog catalog;
  PopularityProfile profile;
};

PaperInstance paper_instance() {
  const ExperimentConfig c = default_paper_config();
  auto sizes = base_sizes(c);
  std::uint64_t total = 0;
  for (auto s : sizes) total += s;
  Catalog catalog(sizes, c.capacity.resolve(total), c.max_users);
  return {catalog, build_zipf_profile(sizes.size(), c.zipf_rho, c.max_users / 2.0, c.max_users)};
}

void BM_GreedyPaper(benchmark::State& state) {
  const auto inst = paper_instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_greedy(inst.profile.theta, inst.catalog));
  }
}
BENCHMARK(BM_GreedyPaper);

void BM_ExactPaper(benchmark::State& state) {
  const auto inst = paper_instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(inst.profile.theta, inst.catalog));
  }
}
BENCHMARK(BM_ExactPaper)->Unit(benchmark::kMillisecond);

void BM_GreedyScaling(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint32_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) sizes[i] = 1u << (i % 8);
  const Catalog catalog(sizes, n, 50);
  const auto profile = build_zipf_profile(n, 0.56, 25.0, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_greedy(profile.theta, catalog));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreedyScaling)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

}  // namespace
