#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cachebandit/catalog.hpp"

namespace cachebandit {

/// Set of cached files (ascending indices) with its storage footprint.
struct CacheContent {
  std::vector<FileId> files;
  std::uint64_t used = 0;

  bool empty() const { return files.empty(); }
  std::size_t count() const { return files.size(); }
  bool contains(FileId f) const;

  friend bool operator==(const CacheContent&, const CacheContent&) = default;
};

/// Builds a cache from arbitrary indices; sorts, rejects duplicates, unknown
/// files and capacity overflow.
CacheContent make_cache(std::vector<FileId> files, const Catalog& catalog);

/// Storage units of `next` that are not already in `previous`, i.e. the
/// replacement cost of moving from `previous` to `next`.
std::uint64_t switch_cost(const CacheContent& next, const CacheContent& previous,
                          std::span<const std::uint32_t> sizes);
std::uint32_t switched_files(const CacheContent& next,
                             const CacheContent& previous);

/// Expected per-period reward U * sum_{f in cache} S_f theta_f.
double expected_reward(const CacheContent& cache, std::span<const double> theta,
                       const Catalog& catalog);

struct SolverRating {
  double alpha = 1.0;
  double beta = 1.0;
};

enum class GreedyMode {
  kStopAtBlocker,  // stop at the first file that does not fit
  kSkipBlocker,    // experimental: keep scanning past non-fitting files
};

enum class SolverKind { kGreedy, kExact };

inline constexpr std::uint64_t kDefaultExactTableLimit = 20'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Greedy knapsack by decreasing theta (ties: lower index first).
CacheContent solve_greedy(std::span<const double> theta,
                          std::span<const std::uint32_t> sizes,
                          std::uint64_t capacity,
                          GreedyMode mode = GreedyMode::kStopAtBlocker);
CacheContent solve_greedy(std::span<const double> theta, const Catalog& catalog,
                          GreedyMode mode = GreedyMode::kStopAtBlocker);

/// Exact 0/1 knapsack maximizing sum S_f theta_f by integer-capacity dynamic
/// programming. Among optimal sets the lexicographically smallest index
/// sequence is returned. Throws BudgetExceeded when F * (M + 1) exceeds
/// `table_limit`.
CacheContent solve_exact(std::span<const double> theta,
                         std::span<const std::uint32_t> sizes,
                         std::uint64_t capacity,
                         std::uint64_t table_limit = kDefaultExactTableLimit);
CacheContent solve_exact(std::span<const double> theta, const Catalog& catalog,
                         std::uint64_t table_limit = kDefaultExactTableLimit);

bool exact_feasible(const Catalog& catalog,
                    std::uint64_t table_limit = kDefaultExactTableLimit);

/// Ratio of greedy to exact expected reward on the true profile; beta = 1.
SolverRating measure_alpha(const Catalog& catalog,
                           const PopularityProfile& profile,
                           std::uint64_t table_limit = kDefaultExactTableLimit);

/// Solver configuration shared by all policies of a run.
struct SolverOptions {
  SolverKind kind = SolverKind::kGreedy;
  GreedyMode greedy_mode = GreedyMode::kStopAtBlocker;
  std::uint64_t exact_table_limit = kDefaultExactTableLimit;

  CacheContent solve(std::span<const double> theta,
                     const Catalog& catalog) const;
};

/// Largest storage fill achievable by any feasible cache (subset sum <= M).
std::uint64_t max_fill(const Catalog& catalog);

}  // namespace cachebandit
