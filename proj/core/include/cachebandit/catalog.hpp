#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace cachebandit {

using Rng = std::mt19937_64;
using FileId = std::uint32_t;

/// File universe: per-file sizes (storage units), cache capacity and the
/// maximum number of users served per period.
class Catalog {
 public:
  Catalog(std::vector<std::uint32_t> sizes, std::uint64_t capacity,
          std::uint32_t max_users);

  std::size_t num_files() const { return sizes_.size(); }
  std::span<const std::uint32_t> sizes() const { return sizes_; }
  std::uint32_t size(FileId f) const { return sizes_[f]; }
  std::uint64_t capacity() const { return capacity_; }
  std::uint32_t max_users() const { return max_users_; }
  std::uint64_t total_size() const { return total_size_; }
  std::uint32_t max_file_size() const { return max_file_size_; }

  /// Fraction of the catalog that fits in the cache, M / sum(S_f).
  double relative_capacity() const;

 private:
  std::vector<std::uint32_t> sizes_;
  std::uint64_t capacity_;
  std::uint32_t max_users_;
  std::uint64_t total_size_ = 0;
  std::uint32_t max_file_size_ = 0;
};

struct SizeClass {
  std::uint32_t size;
  std::uint32_t count;
};

/// How size classes are assigned to popularity ranks.
///
/// Round-robin layouts cycle through the classes so every class spans the
/// whole popularity range; `kRoundRobinDescending` visits the largest class
/// first in every cycle, `kRoundRobinAscending` the smallest. `kBlocked`
/// assigns contiguous rank blocks per class in the listed order.
enum class SizeLayout { kRoundRobinDescending, kRoundRobinAscending, kBlocked };

/// Expands size classes into a per-rank size vector. Rank 0 is the most
/// popular file. Classes with unequal counts drop out of the rotation once
/// exhausted.
std::vector<std::uint32_t> layout_sizes(std::span<const SizeClass> classes,
                                        SizeLayout layout);

/// Lays out `num_files` files over the given class sizes, ignoring the class
/// counts (used when the number of files is swept).
std::vector<std::uint32_t> layout_sizes(std::size_t num_files,
                                        std::span<const SizeClass> classes,
                                        SizeLayout layout);

struct PopularityProfile {
  std::vector<double> theta;          // mean normalized demand per file
  std::vector<double> request_probs;  // per-request file choice law
  double mean_users = 0.0;            // expected users per period
  std::uint32_t max_users = 0;

  std::size_t num_files() const { return theta.size(); }
};

/// Zipf-like profile: p_f proportional to f^-rho over ranks 1..F, and
/// theta_f = (mean_users / U) p_f.
PopularityProfile build_zipf_profile(std::size_t num_files, double rho,
                                     double mean_users,
                                     std::uint32_t max_users);

/// Profile from an explicit request law (normalized here).
PopularityProfile make_profile(std::vector<double> request_probs,
                               double mean_users, std::uint32_t max_users);

/// Realized requests of one period. Demand d_f = requests_f / U.
class DemandVector {
 public:
  DemandVector() = default;
  DemandVector(std::size_t num_files, std::uint32_t max_users)
      : requests_(num_files, 0), max_users_(max_users) {}

  std::size_t num_files() const { return requests_.size(); }
  std::uint32_t num_users() const { return num_users_; }
  std::uint32_t max_users() const { return max_users_; }
  std::uint32_t requests(FileId f) const { return requests_[f]; }
  std::span<const std::uint32_t> requests() const { return requests_; }

  double d(FileId f) const {
    return max_users_ == 0 ? 0.0
                           : static_cast<double>(requests_[f]) / max_users_;
  }

  void reset(std::size_t num_files, std::uint32_t max_users);
  void add_request(FileId f) {
    ++requests_[f];
    ++num_users_;
  }

 private:
  std::vector<std::uint32_t> requests_;
  std::uint32_t num_users_ = 0;
  std::uint32_t max_users_ = 0;
};

/// Source of per-period demand realizations.
class DemandSource {
 public:
  virtual ~DemandSource() = default;
  virtual std::size_t num_files() const = 0;
  virtual std::uint32_t max_users() const = 0;
  virtual void sample(DemandVector& out, Rng& rng) const = 0;
};

/// Built-in generative model: the user count is uniform on {0..U} and each
/// user independently requests one file from the profile's request law.
class UniformUsersDemand final : public DemandSource {
 public:
  explicit UniformUsersDemand(const PopularityProfile& profile);

  std::size_t num_files() const override { return cdf_.size(); }
  std::uint32_t max_users() const override { return max_users_; }
  void sample(DemandVector& out, Rng& rng) const override;

 private:
  std::vector<double> cdf_;
  std::uint32_t max_users_;
};

DemandVector sample_demand(const PopularityProfile& profile,
                           const Catalog& catalog, Rng& rng);

}  // namespace cachebandit
