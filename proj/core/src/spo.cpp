#include "cachebandit/spo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cachebandit {

bool CacheContent::contains(FileId f) const {
  return std::binary_search(files.begin(), files.end(), f);
}

CacheContent make_cache(std::vector<FileId> files, const Catalog& catalog) {
  std::sort(files.begin(), files.end());
  if (std::adjacent_find(files.begin(), files.end()) != files.end()) {
    throw std::invalid_argument("cache content has duplicate files");
  }
  CacheContent cache;
  for (FileId f : files) {
    if (f >= catalog.num_files()) {
      throw std::invalid_argument("unknown file index " + std::to_string(f));
    }
    cache.used += catalog.size(f);
  }
  if (cache.used > catalog.capacity()) {
    throw std::invalid_argument("cache content exceeds capacity");
  }
  cache.files = std::move(files);
  return cache;
}

std::uint64_t switch_cost(const CacheContent& next, const CacheContent& previous,
                          std::span<const std::uint32_t> sizes) {
  std::uint64_t cost = 0;
  auto prev = previous.files.begin();
  for (FileId f : next.files) {
    while (prev != previous.files.end() && *prev < f) ++prev;
    if (prev == previous.files.end() || *prev != f) cost += sizes[f];
  }
  return cost;
}

std::uint32_t switched_files(const CacheContent& next,
                             const CacheContent& previous) {
  std::uint32_t n = 0;
  auto prev = previous.files.begin();
  for (FileId f : next.files) {
    while (prev != previous.files.end() && *prev < f) ++prev;
    if (prev == previous.files.end() || *prev != f) ++n;
  }
  return n;
}

double expected_reward(const CacheContent& cache, std::span<const double> theta,
                       const Catalog& catalog) {
  double value = 0.0;
  for (FileId f : cache.files) {
    value += static_cast<double>(catalog.size(f)) * theta[f];
  }
  return static_cast<double>(catalog.max_users()) * value;
}

namespace {

void check_inputs(std::span<const double> theta,
                  std::span<const std::uint32_t> sizes) {
  if (theta.size() != sizes.size()) {
    throw std::invalid_argument("theta and sizes disagree on F");
  }
  for (double x : theta) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("solver estimates must be finite and >= 0");
    }
  }
}

}  // namespace

CacheContent solve_greedy(std::span<const double> theta,
                          std::span<const std::uint32_t> sizes,
                          std::uint64_t capacity, GreedyMode mode) {
  CacheContent cache;
  if (theta.empty()) return cache;
  check_inputs(theta, sizes);

  // Max-heap on (theta desc, index asc): O(F + k log F) for k picked files.
  std::vector<FileId> heap(theta.size());
  for (std::size_t f = 0; f < heap.size(); ++f) heap[f] = static_cast<FileId>(f);
  const auto lower_priority = [&theta](FileId a, FileId b) {
    return theta[a] < theta[b] || (theta[a] == theta[b] && a > b);
  };
  std::make_heap(heap.begin(), heap.end(), lower_priority);

  auto end = heap.end();
  while (end != heap.begin() && cache.used < capacity) {
    std::pop_heap(heap.begin(), end, lower_priority);
    --end;
    const FileId f = *end;
    if (cache.used + sizes[f] <= capacity) {
      cache.files.push_back(f);
      cache.used += sizes[f];
    } else if (mode == GreedyMode::kStopAtBlocker) {
      break;
    }
  }
  std::sort(cache.files.begin(), cache.files.end());
  return cache;
}

CacheContent solve_greedy(std::span<const double> theta, const Catalog& catalog,
                          GreedyMode mode) {
  return solve_greedy(theta, catalog.sizes(), catalog.capacity(), mode);
}

CacheContent solve_exact(std::span<const double> theta,
                         std::span<const std::uint32_t> sizes,
                         std::uint64_t capacity, std::uint64_t table_limit) {
  CacheContent cache;
  if (theta.empty()) return cache;
  check_inputs(theta, sizes);

  const std::size_t n = theta.size();
  const std::uint64_t width = capacity + 1;
  if (width == 0 || n > table_limit / width) {
    throw BudgetExceeded("exact solver table " + std::to_string(n) + " x " +
                         std::to_string(width) + " exceeds limit " +
                         std::to_string(table_limit));
  }

  // best[f][c]: optimal value using files f..n-1 within capacity c.
  std::vector<double> best((n + 1) * width, 0.0);
  const auto at = [&](std::size_t f, std::uint64_t c) -> double& {
    return best[f * width + c];
  };
  for (std::size_t f = n; f-- > 0;) {
    const double value = static_cast<double>(sizes[f]) * theta[f];
    for (std::uint64_t c = 0; c < width; ++c) {
      double v = at(f + 1, c);
      if (sizes[f] <= c) v = std::max(v, value + at(f + 1, c - sizes[f]));
      at(f, c) = v;
    }
  }

  // Forward reconstruction: take a file whenever the optimum stays reachable;
  // stop once nothing of value remains (a shorter prefix sorts first).
  const double tol = 1e-12 * std::max(1.0, at(0, capacity));
  std::uint64_t c = capacity;
  for (std::size_t f = 0; f < n; ++f) {
    const double remaining = at(f, c);
    if (remaining <= tol) break;
    if (sizes[f] <= c) {
      const double with =
          static_cast<double>(sizes[f]) * theta[f] + at(f + 1, c - sizes[f]);
      if (with >= remaining - tol) {
        cache.files.push_back(static_cast<FileId>(f));
        cache.used += sizes[f];
        c -= sizes[f];
      }
    }
  }
  return cache;
}

CacheContent solve_exact(std::span<const double> theta, const Catalog& catalog,
                         std::uint64_t table_limit) {
  return solve_exact(theta, catalog.sizes(), catalog.capacity(), table_limit);
}

bool exact_feasible(const Catalog& catalog, std::uint64_t table_limit) {
  const std::uint64_t width = catalog.capacity() + 1;
  return catalog.num_files() <= table_limit / width;
}

SolverRating measure_alpha(const Catalog& catalog,
                           const PopularityProfile& profile,
                           std::uint64_t table_limit) {
  const double greedy =
      expected_reward(solve_greedy(profile.theta, catalog), profile.theta, catalog);
  const double exact =
      expected_reward(solve_exact(profile.theta, catalog, table_limit),
                      profile.theta, catalog);
  SolverRating rating;
  rating.alpha = exact > 0.0 ? greedy / exact : 1.0;
  rating.beta = 1.0;
  return rating;
}

CacheContent SolverOptions::solve(std::span<const double> theta,
                                  const Catalog& catalog) const {
  if (kind == SolverKind::kExact) {
    return solve_exact(theta, catalog, exact_table_limit);
  }
  return solve_greedy(theta, catalog, greedy_mode);
}

std::uint64_t max_fill(const Catalog& catalog) {
  const std::uint64_t m = catalog.capacity();
  if (catalog.total_size() <= m) return catalog.total_size();
  std::vector<char> reachable(m + 1, 0);
  reachable[0] = 1;
  for (std::uint32_t s : catalog.sizes()) {
    if (s > m) continue;
    for (std::uint64_t c = m; c >= s; --c) {
      if (reachable[c - s]) reachable[c] = 1;
      if (c == s) break;
    }
  }
  std::uint64_t best = m;
  while (best > 0 && !reachable[best]) --best;
  return best;
}

}  // namespace cachebandit
