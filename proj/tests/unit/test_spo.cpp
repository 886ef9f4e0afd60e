#include <gtest/gtest.h>

#include <random>

#include "cachebandit/spo.hpp"
#include "oracle.hpp"

using namespace cachebandit;

namespace {

std::vector<FileId> ids(std::initializer_list<FileId> list) { return list; }

}  // namespace

TEST(Greedy, EmptyInputs) {
  EXPECT_TRUE(solve_greedy(std::vector<double>{}, std::vector<std::uint32_t>{}, 3).empty());
  EXPECT_TRUE(solve_greedy(std::vector<double>{0, 0}, std::vector<std::uint32_t>{1, 1}, 0)
                  .empty());
}

TEST(Greedy, StopsAtFirstBlocker) {
  const Catalog c({2, 2, 1}, 3, 10);
  const std::vector<double> theta{0.5, 0.4, 0.3};
  const auto cache = solve_greedy(theta, c);
  EXPECT_EQ(cache.files, ids({0}));
  EXPECT_EQ(cache.used, 2u);
  EXPECT_DOUBLE_EQ(expected_reward(cache, theta, c), 1.0 * 10);
}

TEST(Greedy, SkipModeContinuesPastBlocker) {
  const Catalog c({2, 2, 1}, 3, 10);
  const auto cache = solve_greedy(std::vector<double>{0.5, 0.4, 0.3}, c,
                                  GreedyMode::kSkipBlocker);
  EXPECT_EQ(cache.files, ids({0, 2}));
}

TEST(Greedy, EverythingFits) {
  const Catalog c({1, 1, 1}, 3, 10);
  EXPECT_EQ(solve_greedy(std::vector<double>{0.5, 0.4, 0.3}, c).files, ids({0, 1, 2}));
}

TEST(Greedy, TiesGoToLowerIndex) {
  const Catalog c({1, 1, 1, 1}, 2, 10);
  EXPECT_EQ(solve_greedy(std::vector<double>{0.2, 0.3, 0.3, 0.3}, c).files, ids({1, 2}));
}

TEST(Greedy, RejectsNegativeEstimates) {
  const Catalog c({1, 1}, 1, 10);
  EXPECT_THROW(solve_greedy(std::vector<double>{-0.1, 0.2}, c), std::invalid_argument);
}

TEST(Exact, SmallExample) {
  const Catalog c({2, 2, 1}, 3, 10);
  const std::vector<double> theta{0.5, 0.4, 0.3};
  const auto cache = solve_exact(theta, c);
  EXPECT_EQ(cache.files, ids({0, 2}));
  EXPECT_NEAR(expected_reward(cache, theta, c), 1.3 * 10, 1e-12);
  const auto brute = oracle::best_subset(theta, {2, 2, 1}, 3);
  EXPECT_EQ(std::vector<FileId>(brute.files.begin(), brute.files.end()), cache.files);
}

TEST(Exact, UnconstrainedTakesAll) {
  const Catalog c({3, 1, 4}, 100, 10);
  EXPECT_EQ(solve_exact(std::vector<double>{0.1, 0.2, 0.3}, c).files, ids({0, 1, 2}));
}

TEST(Exact, SymmetricTieBreak) {
  const Catalog c({2, 2, 2, 2, 2}, 6, 10);
  EXPECT_EQ(solve_exact(std::vector<double>(5, 0.1), c).files, ids({0, 1, 2}));
}

TEST(Exact, BudgetGuard) {
  const Catalog c({1, 1, 1}, 1000, 10);
  EXPECT_THROW(solve_exact(std::vector<double>{0.1, 0.1, 0.1}, c, 100), BudgetExceeded);
  EXPECT_FALSE(exact_feasible(c, 100));
  EXPECT_TRUE(exact_feasible(c));
}

TEST(Alpha, SmallExample) {
  const Catalog c({2, 2, 1}, 3, 10);
  const auto p = make_profile({0.5, 0.4, 0.3}, 5.0, 10);
  const auto rating = measure_alpha(c, p);
  EXPECT_NEAR(rating.alpha, 1.0 / 1.3, 1e-12);
  EXPECT_EQ(rating.beta, 1.0);
}

TEST(Alpha, AllFit) {
  const Catalog c({1, 2, 3}, 6, 10);
  EXPECT_EQ(measure_alpha(c, build_zipf_profile(3, 0.7, 5.0, 10)).alpha, 1.0);
}

TEST(Alpha, EqualSizesAreExact) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t f = 1 + rng() % 12;
    const std::uint32_t s = 1 + rng() % 5;
    const std::uint64_t k = rng() % (f + 1);
    std::vector<double> probs(f);
    for (auto& p : probs) p = std::uniform_real_distribution<>(0.01, 1.0)(rng);
    const Catalog c(std::vector<std::uint32_t>(f, s), std::max<std::uint64_t>(1, k * s), 10);
    EXPECT_NEAR(measure_alpha(c, make_profile(probs, 5.0, 10)).alpha, 1.0, 1e-12);
  }
}

TEST(Solvers, MatchOraclesOnRandomInstances) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t f = 1 + rng() % 10;
    std::vector<std::uint32_t> sizes(f);
    std::vector<double> theta(f);
    for (auto& s : sizes) s = 1 + rng() % 8;
    for (auto& t : theta) t = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    const std::uint64_t m = 1 + rng() % 30;
    const Catalog c(sizes, m, 10);
    const auto exact = solve_exact(theta, c);
    const auto greedy = solve_greedy(theta, c);
    const auto best = oracle::best_subset(theta, sizes, m);
    EXPECT_EQ(exact.files, std::vector<FileId>(best.files.begin(), best.files.end()));
    const auto ref = oracle::greedy_stop(theta, sizes, m);
    EXPECT_EQ(greedy.files, std::vector<FileId>(ref.begin(), ref.end()));
    EXPECT_LE(greedy.used, m);
    EXPECT_LE(expected_reward(greedy, theta, c), expected_reward(exact, theta, c) + 1e-12);
  }
}

TEST(Solvers, ArgmaxInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t f = 1 + rng() % 10;
    std::vector<std::uint32_t> sizes(f);
    std::vector<double> theta(f), scaled(f);
    for (auto& s : sizes) s = 1 + rng() % 8;
    const double k = std::uniform_real_distribution<>(0.1, 50.0)(rng);
    for (std::size_t i = 0; i < f; ++i) {
      theta[i] = std::uniform_real_distribution<>(0.0, 1.0)(rng);
      scaled[i] = theta[i] * k;
    }
    const Catalog c(sizes, 1 + rng() % 30, 10);
    EXPECT_EQ(solve_greedy(theta, c), solve_greedy(scaled, c));
    EXPECT_EQ(solve_exact(theta, c), solve_exact(scaled, c));
  }
}

TEST(CacheContent, MakeCacheValidates) {
  const Catalog c({2, 2, 1}, 3, 10);
  const auto cache = make_cache({2, 0}, c);
  EXPECT_EQ(cache.files, ids({0, 2}));
  EXPECT_EQ(cache.used, 3u);
  EXPECT_THROW(make_cache({0, 0}, c), std::invalid_argument);
  EXPECT_THROW(make_cache({5}, c), std::invalid_argument);
  EXPECT_THROW(make_cache({0, 1}, c), std::invalid_argument);
}

TEST(CacheContent, SwitchCostCountsNewFiles) {
  const Catalog c({2, 2, 1, 4}, 8, 10);
  const auto a = make_cache({0, 1}, c);
  const auto b = make_cache({1, 2, 3}, c);
  EXPECT_EQ(switch_cost(b, a, c.sizes()), 5u);
  EXPECT_EQ(switched_files(b, a), 2u);
  EXPECT_EQ(switch_cost(a, a, c.sizes()), 0u);
}

TEST(MaxFill, SubsetSum) {
  EXPECT_EQ(max_fill(Catalog({3, 5, 7}, 11, 10)), 10u);
  EXPECT_EQ(max_fill(Catalog({1, 1, 2, 2, 3}, 4, 10)), 4u);
  EXPECT_EQ(max_fill(Catalog({9}, 4, 10)), 0u);
}
