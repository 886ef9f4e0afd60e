#pragma once

// Brute-force references used by the tests. They share no code with the
// library: subsets are enumerated directly and sums are taken in long double.

#include <cstdint>
#include <vector>

namespace oracle {

struct Subset {
  std::vector<std::uint32_t> files;  // ascending
  std::uint64_t used = 0;
  long double value = 0;  // sum S_f theta_f
};

/// Best subset by value; among equal values the lexicographically smallest
/// index sequence.
Subset best_subset(const std::vector<double>& theta,
                   const std::vector<std::uint32_t>& sizes,
                   std::uint64_t capacity);

/// Every feasible subset, including the empty one, in mask order.
std::vector<Subset> feasible_subsets(const std::vector<double>& theta,
                                     const std::vector<std::uint32_t>& sizes,
                                     std::uint64_t capacity);

/// Greedy reference: sort by theta (desc, lower index first), stop at the
/// first file that does not fit.
std::vector<std::uint32_t> greedy_stop(const std::vector<double>& theta,
                                       const std::vector<std::uint32_t>& sizes,
                                       std::uint64_t capacity);

/// p_1 of a Zipf law over F ranks, summed smallest terms first in long double.
long double zipf_head(std::size_t num_files, double rho);

}  // namespace oracle
