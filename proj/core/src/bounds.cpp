#include "cachebandit/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cachebandit {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

SwitchingSchedule fresh(const SwitchingSchedule& s) {
  switch (s.kind()) {
    case SwitchingSchedule::Kind::kEveryPeriod:
      return SwitchingSchedule::every_period(s.num_files());
    case SwitchingSchedule::Kind::kConstant:
      return SwitchingSchedule::constant(s.num_files(), s.constant_gap());
    case SwitchingSchedule::Kind::kSqrt:
      break;
  }
  return SwitchingSchedule::sqrt_growth(s.num_files(), s.gamma());
}

}  // namespace

CombinationSummary enumerate_combinations(const Catalog& catalog,
                                          const PopularityProfile& profile,
                                          double alpha,
                                          EnumerationLimits limits) {
  const std::size_t n = catalog.num_files();
  if (n > limits.max_files || n >= 32) {
    throw EnumerationBudgetExceeded(
        "combination enumeration limited to " +
        std::to_string(limits.max_files) + " files, catalog has " +
        std::to_string(n));
  }
  if (profile.num_files() != n) {
    throw std::invalid_argument("profile and catalog disagree on F");
  }
  const std::uint32_t count = 1u << n;
  const double users = static_cast<double>(catalog.max_users());
  std::vector<std::uint64_t> fill(count, 0);
  std::vector<double> reward(count, 0.0);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const std::uint32_t low = static_cast<std::uint32_t>(std::countr_zero(mask));
    fill[mask] = fill[mask & (mask - 1)] + catalog.size(low);
    if (fill[mask] > catalog.capacity()) continue;
    // Same summation order as expected_reward, so values compare exactly.
    double sum = 0.0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const FileId f = static_cast<FileId>(std::countr_zero(rest));
      sum += static_cast<double>(catalog.size(f)) * profile.theta[f];
    }
    reward[mask] = users * sum;
  }

  CombinationSummary out;
  out.alpha = alpha;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    if (fill[mask] <= catalog.capacity()) {
      out.r_opt = std::max(out.r_opt, reward[mask]);
      out.max_fill = std::max(out.max_fill, fill[mask]);
    }
  }
  const double threshold = alpha * out.r_opt;
  std::vector<std::uint32_t> good;
  out.min_bad_reward = std::numeric_limits<double>::infinity();
  out.max_bad_reward = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    if (fill[mask] > catalog.capacity()) continue;
    ++out.num_feasible;
    if (reward[mask] >= threshold) {
      good.push_back(mask);
    } else {
      ++out.num_bad;
      out.min_bad_reward = std::min(out.min_bad_reward, reward[mask]);
      out.max_bad_reward = std::max(out.max_bad_reward, reward[mask]);
    }
  }
  out.num_good = good.size();
  const std::uint64_t pairs = static_cast<std::uint64_t>(good.size()) * good.size();
  if (pairs > limits.max_good_pairs) {
    throw EnumerationBudgetExceeded("too many good combinations to pair (" +
                                    std::to_string(good.size()) + ")");
  }
  for (std::uint32_t a : good) {
    for (std::uint32_t b : good) {
      out.max_good_switch = std::max(out.max_good_switch, fill[a & ~b]);
    }
  }
  return out;
}

K1Series k1_series(const SwitchingSchedule& schedule, std::uint64_t terms) {
  if (terms == 0) throw std::invalid_argument("k1_series needs at least one term");
  SwitchingSchedule s = fresh(schedule);
  K1Series out;
  out.terms = terms;
  for (std::uint64_t j = 0; j < terms; ++j) {
    const double n = static_cast<double>(s.current());
    out.partial += 2.0 * static_cast<double>(s.gap()) / (n * n);
    s.advance();
  }
  const double next = static_cast<double>(s.current());
  double eps = 0.0;
  if (s.kind() == SwitchingSchedule::Kind::kSqrt) {
    eps = (s.gamma() * std::sqrt(next) + 1.0) / next;
  } else {
    eps = static_cast<double>(s.constant_gap()) / next;
  }
  out.tail_bound = 2.0 * (1.0 + eps) / next;
  return out;
}

double k1_closed_form(const SwitchingSchedule& schedule) {
  switch (schedule.kind()) {
    case SwitchingSchedule::Kind::kSqrt:
      return kPi2 / 3.0 + 4.12 * schedule.gamma();
    case SwitchingSchedule::Kind::kConstant:
      return kPi2 / (3.0 * static_cast<double>(schedule.constant_gap()));
    case SwitchingSchedule::Kind::kEveryPeriod:
      break;
  }
  return kPi2 / 3.0;
}

double BoundConstants::l(double t) const {
  const double g = g_inv(delta_l);
  return 6.0 * std::log(t) / (g * g);
}

BoundConstants compute_bound_constants(const Catalog& catalog,
                                       const PopularityProfile& profile,
                                       double alpha,
                                       const SwitchingSchedule& schedule,
                                       EnumerationLimits limits) {
  if (schedule.num_files() != catalog.num_files()) {
    throw std::invalid_argument("schedule and catalog disagree on F");
  }
  const CombinationSummary summary =
      enumerate_combinations(catalog, profile, alpha, limits);
  if (summary.num_bad == 0) {
    throw DegenerateInstance("no bad cache combination: Delta_l is undefined");
  }
  if (catalog.max_users() == 0) {
    throw DegenerateInstance("g^-1 is undefined for U = 0");
  }
  BoundConstants c;
  c.num_files = catalog.num_files();
  c.r_opt = summary.r_opt;
  c.alpha = alpha;
  c.delta_u = alpha * summary.r_opt - summary.min_bad_reward;
  c.delta_l = alpha * summary.r_opt - summary.max_bad_reward;
  c.m_u = static_cast<double>(summary.max_fill);
  c.m_l = static_cast<double>(summary.max_good_switch);
  c.capacity = static_cast<double>(catalog.capacity());
  c.g_inv_slope = 1.0 / (static_cast<double>(catalog.max_users()) *
                         static_cast<double>(catalog.capacity()));
  c.schedule = fresh(schedule);
  c.k1 = k1_closed_form(schedule);
  c.k1_check = k1_series(schedule, 100'000);
  c.c = schedule.kind() == SwitchingSchedule::Kind::kSqrt
            ? constant_c(c, schedule.gamma())
            : std::numeric_limits<double>::quiet_NaN();
  return c;
}

double constant_c(const BoundConstants& k, double gamma) {
  const double f = static_cast<double>(k.num_files);
  const SwitchingSchedule s = SwitchingSchedule::sqrt_growth(k.num_files, gamma);
  const std::uint64_t n1 = s.current();
  const double delta1 = static_cast<double>(s.gap_at(n1));
  const double delta2 = static_cast<double>(s.gap_at(n1 + s.gap_at(n1)));
  const double g = k.g_inv(k.delta_l);
  const double bracket = 6.0 * std::log(f + 1.0) / (g * g * delta1) + 1.0 +
                         kPi2 / 6.0 + gamma +
                         (kPi2 / 3.0 + 4.12 * gamma) / delta2 - 1.0 / delta1;
  return 2.0 * (k.m_u - k.m_l) * f * bracket + f * k.m_u - k.m_l;
}

double theorem1_bound(const BoundConstants& k, const Theorem1Params& p,
                      double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("bounds are defined for t >= 1");
  if (k.m_u == k.m_l) {
    throw DegenerateInstance("Theorem 1 bound undefined when M_u == M_l");
  }
  if (!sqrt_gamma_admissible(k.num_files, p.gamma)) {
    throw DegenerateInstance("gamma outside the admissible range");
  }
  const double f = static_cast<double>(k.num_files);
  const double g = k.g_inv(k.delta_l);
  const double spread = k.m_u - k.m_l;
  const double log_term =
      std::log(t) *
      (6.0 / (g * g) * (p.w + k.delta_u / (2.0 * spread)) + p.w * p.gamma / 2.0) *
      2.0 * f * spread;
  const double sqrt_term =
      std::sqrt(t) * (p.w * k.m_u + p.w * spread * (1.0 - 2.0 * p.beta) +
                      f * k.delta_u * p.gamma);
  const double fixed = (kPi2 / 3.0 + 4.12 * p.gamma + 1.0) * f * k.delta_u +
                       p.w * constant_c(k, p.gamma);
  return log_term + sqrt_term + fixed;
}

double theorem2_bound(const BoundConstants& k, const Theorem2Params& p,
                      double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("bounds are defined for t >= 1");
  if (p.lockup < 1) throw std::invalid_argument("Theorem 2 needs L >= 1");
  const double f = static_cast<double>(k.num_files);
  const double l = static_cast<double>(p.lockup);
  const double g2 = k.g_inv(k.delta_l) * k.g_inv(k.delta_l);
  return 6.0 * f * std::log(t) / g2 * (k.delta_u + p.w * 2.0 * k.m_u / l) +
         f * k.delta_u * (kPi2 / 3.0 + l) +
         p.w * f * 2.0 * k.m_u / l *
             (kPi2 / (3.0 * l) + 3.0 / (2.0 * l) - 1.0 +
              std::log(1.0 + (l - 1.0) / (f + 1.0)) / g2);
}

double bad_period_rhs(const BoundConstants& k, double beta, std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("bounds are defined for t >= 1");
  const double f = static_cast<double>(k.num_files);
  const double max_gap = static_cast<double>(k.schedule.max_gap_until(t));
  return (1.0 - beta) * (static_cast<double>(t) - f) +
         f * (k.k1 + k.l(static_cast<double>(t)) + max_gap);
}

BadPeriodCheck bad_period_bound_check(std::span<const std::uint64_t> checkpoints,
                                      std::span<const double> mean_bad_periods,
                                      const BoundConstants& constants,
                                      double beta) {
  if (checkpoints.size() != mean_bad_periods.size()) {
    throw std::invalid_argument("checkpoint and series lengths differ");
  }
  BadPeriodCheck out;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double rhs = bad_period_rhs(constants, beta, checkpoints[i]);
    out.worst_ratio = std::max(out.worst_ratio, mean_bad_periods[i] / rhs);
    if (mean_bad_periods[i] > rhs && out.passed) {
      out.passed = false;
      out.first_violation = checkpoints[i];
    }
  }
  return out;
}

}  // namespace cachebandit
