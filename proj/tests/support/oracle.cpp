#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

namespace {

Subset from_mask(std::uint64_t mask, const std::vector<double>& theta,
                 const std::vector<std::uint32_t>& sizes) {
  Subset s;
  for (std::uint32_t f = 0; f < sizes.size(); ++f) {
    if (mask >> f & 1U) {
      s.files.push_back(f);
      s.used += sizes[f];
      s.value += static_cast<long double>(sizes[f]) * theta[f];
    }
  }
  return s;
}

}  // namespace

std::vector<Subset> feasible_subsets(const std::vector<double>& theta,
                                     const std::vector<std::uint32_t>& sizes,
                                     std::uint64_t capacity) {
  std::vector<Subset> out;
  const std::uint64_t n = std::uint64_t{1} << sizes.size();
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    Subset s = from_mask(mask, theta, sizes);
    if (s.used <= capacity) out.push_back(std::move(s));
  }
  return out;
}

Subset best_subset(const std::vector<double>& theta,
                   const std::vector<std::uint32_t>& sizes,
                   std::uint64_t capacity) {
  Subset best;
  bool have = false;
  for (auto& s : feasible_subsets(theta, sizes, capacity)) {
    if (!have || s.value > best.value ||
        (s.value == best.value && s.files < best.files)) {
      best = s;
      have = true;
    }
  }
  return best;
}

std::vector<std::uint32_t> greedy_stop(const std::vector<double>& theta,
                                       const std::vector<std::uint32_t>& sizes,
                                       std::uint64_t capacity) {
  std::vector<std::uint32_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return theta[a] > theta[b]; });
  std::vector<std::uint32_t> out;
  std::uint64_t used = 0;
  for (auto f : order) {
    if (used + sizes[f] > capacity) break;
    used += sizes[f];
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

long double zipf_head(std::size_t num_files, double rho) {
  long double sum = 0;
  for (std::size_t k = num_files; k >= 1; --k) {
    sum += std::pow(static_cast<long double>(k), -static_cast<long double>(rho));
  }
  return 1.0L / sum;
}

}  // namespace oracle
