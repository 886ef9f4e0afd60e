#include "cachebandit/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cachebandit {

SwitchingSchedule::SwitchingSchedule(Kind kind, std::size_t num_files,
                                     std::uint64_t gap, double gamma)
    : kind_(kind),
      num_files_(num_files),
      gap_(gap),
      gamma_(gamma),
      current_(static_cast<std::uint64_t>(num_files) + 1) {}

SwitchingSchedule SwitchingSchedule::every_period(std::size_t num_files) {
  return SwitchingSchedule(Kind::kEveryPeriod, num_files, 1, 0.0);
}

SwitchingSchedule SwitchingSchedule::constant(std::size_t num_files,
                                              std::uint64_t gap) {
  if (gap == 0) throw std::invalid_argument("constant schedule needs L >= 1");
  return SwitchingSchedule(Kind::kConstant, num_files, gap, 0.0);
}

SwitchingSchedule SwitchingSchedule::sqrt_growth(std::size_t num_files,
                                                 double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("sqrt schedule needs gamma > 0");
  return SwitchingSchedule(Kind::kSqrt, num_files, 0, gamma);
}

std::uint64_t SwitchingSchedule::gap_at(std::uint64_t n) const {
  if (kind_ != Kind::kSqrt) return gap_;
  const double g = std::ceil(gamma_ * std::sqrt(static_cast<double>(n)));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g));
}

void SwitchingSchedule::advance() {
  current_ += gap_at(current_);
  ++index_;
}

std::uint64_t SwitchingSchedule::max_gap_until(std::uint64_t t) const {
  const std::uint64_t first = static_cast<std::uint64_t>(num_files_) + 1;
  if (t < first) return 0;
  if (kind_ != Kind::kSqrt) return gap_;
  // Gaps grow with n, so the maximum is the gap of the last period <= t.
  std::uint64_t n = first;
  std::uint64_t gap = gap_at(n);
  while (n + gap <= t) {
    n += gap;
    gap = gap_at(n);
  }
  return gap;
}

std::uint64_t SwitchingSchedule::periods_until(std::uint64_t t) const {
  const std::uint64_t first = static_cast<std::uint64_t>(num_files_) + 1;
  if (t < first) return 0;
  if (kind_ != Kind::kSqrt) return (t - first) / gap_ + 1;
  std::uint64_t n = first;
  std::uint64_t b = 1;
  for (std::uint64_t gap = gap_at(n); n + gap <= t; gap = gap_at(n)) {
    n += gap;
    ++b;
  }
  return b;
}

double sqrt_gamma_lower(std::size_t num_files) {
  return 2.0 + 1.0 / std::sqrt(static_cast<double>(num_files) + 1.0);
}

double sqrt_gamma_upper(std::size_t num_files) {
  const double f = static_cast<double>(num_files);
  return (f * f + f - 1.0) / std::sqrt(f + 1.0);
}

bool sqrt_gamma_admissible(std::size_t num_files, double gamma) {
  return gamma >= sqrt_gamma_lower(num_files) &&
         gamma <= sqrt_gamma_upper(num_files);
}

}  // namespace cachebandit
