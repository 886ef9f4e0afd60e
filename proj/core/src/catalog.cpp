#include "cachebandit/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cachebandit {

Catalog::Catalog(std::vector<std::uint32_t> sizes, std::uint64_t capacity,
                 std::uint32_t max_users)
    : sizes_(std::move(sizes)), capacity_(capacity), max_users_(max_users) {
  if (sizes_.empty()) {
    throw std::invalid_argument("catalog needs at least one file");
  }
  if (capacity_ == 0) {
    throw std::invalid_argument("cache capacity must be positive");
  }
  for (std::size_t f = 0; f < sizes_.size(); ++f) {
    if (sizes_[f] == 0) {
      throw std::invalid_argument("file " + std::to_string(f + 1) +
                                  " has zero size");
    }
    total_size_ += sizes_[f];
    max_file_size_ = std::max(max_file_size_, sizes_[f]);
  }
}

double Catalog::relative_capacity() const {
  return static_cast<double>(capacity_) / static_cast<double>(total_size_);
}

namespace {

std::vector<SizeClass> ordered_classes(std::span<const SizeClass> classes,
                                       SizeLayout layout) {
  std::vector<SizeClass> ordered(classes.begin(), classes.end());
  if (layout == SizeLayout::kRoundRobinDescending) {
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SizeClass& a, const SizeClass& b) {
                       return a.size > b.size;
                     });
  } else if (layout == SizeLayout::kRoundRobinAscending) {
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SizeClass& a, const SizeClass& b) {
                       return a.size < b.size;
                     });
  }
  return ordered;
}

}  // namespace

std::vector<std::uint32_t> layout_sizes(std::span<const SizeClass> classes,
                                        SizeLayout layout) {
  std::vector<SizeClass> remaining = ordered_classes(classes, layout);
  std::vector<std::uint32_t> sizes;
  if (layout == SizeLayout::kBlocked) {
    for (const SizeClass& c : remaining) {
      sizes.insert(sizes.end(), c.count, c.size);
    }
    return sizes;
  }
  bool placed = true;
  while (placed) {
    placed = false;
    for (SizeClass& c : remaining) {
      if (c.count > 0) {
        sizes.push_back(c.size);
        --c.count;
        placed = true;
      }
    }
  }
  return sizes;
}

std::vector<std::uint32_t> layout_sizes(std::size_t num_files,
                                        std::span<const SizeClass> classes,
                                        SizeLayout layout) {
  if (classes.empty()) {
    throw std::invalid_argument("no size classes given");
  }
  std::vector<SizeClass> even = ordered_classes(classes, layout);
  const std::size_t k = even.size();
  for (std::size_t i = 0; i < k; ++i) {
    even[i].count = static_cast<std::uint32_t>(num_files / k +
                                               (i < num_files % k ? 1 : 0));
  }
  if (layout == SizeLayout::kBlocked) {
    return layout_sizes(even, layout);
  }
  std::vector<std::uint32_t> sizes(num_files);
  for (std::size_t r = 0; r < num_files; ++r) {
    sizes[r] = even[r % k].size;
  }
  return sizes;
}

PopularityProfile make_profile(std::vector<double> request_probs,
                               double mean_users, std::uint32_t max_users) {
  if (request_probs.empty()) {
    throw std::invalid_argument("popularity profile needs at least one file");
  }
  if (!(mean_users >= 0.0) || mean_users > static_cast<double>(max_users)) {
    throw std::invalid_argument("mean_users must lie in [0, max_users]");
  }
  double total = 0.0;
  for (double p : request_probs) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("request probabilities must be >= 0");
    }
    total += p;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("request probabilities sum to zero");
  }
  PopularityProfile profile;
  profile.mean_users = mean_users;
  profile.max_users = max_users;
  profile.request_probs = std::move(request_probs);
  for (double& p : profile.request_probs) p /= total;
  const double scale =
      max_users == 0 ? 0.0 : mean_users / static_cast<double>(max_users);
  profile.theta.resize(profile.request_probs.size());
  for (std::size_t f = 0; f < profile.theta.size(); ++f) {
    profile.theta[f] = scale * profile.request_probs[f];
  }
  return profile;
}

PopularityProfile build_zipf_profile(std::size_t num_files, double rho,
                                     double mean_users,
                                     std::uint32_t max_users) {
  if (num_files == 0) {
    throw std::invalid_argument("zipf profile needs at least one file");
  }
  if (!(rho >= 0.0)) {
    throw std::invalid_argument("zipf skewness must be >= 0");
  }
  std::vector<double> weights(num_files);
  for (std::size_t f = 0; f < num_files; ++f) {
    weights[f] = std::pow(static_cast<double>(f + 1), -rho);
  }
  return make_profile(std::move(weights), mean_users, max_users);
}

void DemandVector::reset(std::size_t num_files, std::uint32_t max_users) {
  requests_.assign(num_files, 0);
  num_users_ = 0;
  max_users_ = max_users;
}

UniformUsersDemand::UniformUsersDemand(const PopularityProfile& profile)
    : cdf_(profile.request_probs.size()), max_users_(profile.max_users) {
  const double expected = 0.5 * static_cast<double>(max_users_);
  if (std::abs(profile.mean_users - expected) > 1e-12 * (1.0 + expected)) {
    throw std::invalid_argument(
        "uniform user counts on {0..U} imply mean_users = U/2");
  }
  std::partial_sum(profile.request_probs.begin(), profile.request_probs.end(),
                   cdf_.begin());
  // Pin the tail so every draw in [0,1) lands on a file with positive mass.
  const double last = cdf_.back();
  for (double& c : cdf_) c /= last;
  for (auto it = cdf_.rbegin(); it != cdf_.rend() && *it >= 1.0 - 1e-15; ++it) {
    *it = 1.0;
  }
}

void UniformUsersDemand::sample(DemandVector& out, Rng& rng) const {
  out.reset(cdf_.size(), max_users_);
  std::uniform_int_distribution<std::uint32_t> users(0, max_users_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::uint32_t n = users(rng);
  for (std::uint32_t u = 0; u < n; ++u) {
    const double x = unit(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
    const auto f = static_cast<FileId>(
        std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                 static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    out.add_request(f);
  }
}

DemandVector sample_demand(const PopularityProfile& profile,
                           const Catalog& catalog, Rng& rng) {
  if (profile.num_files() != catalog.num_files()) {
    throw std::invalid_argument("profile and catalog disagree on F");
  }
  DemandVector out;
  UniformUsersDemand(profile).sample(out, rng);
  return out;
}

}  // namespace cachebandit
