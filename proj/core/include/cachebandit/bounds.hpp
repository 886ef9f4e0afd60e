#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cachebandit/catalog.hpp"
#include "cachebandit/schedule.hpp"

namespace cachebandit {

class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a bound is not defined for the instance (no bad combination,
/// M_u == M_l, gamma outside the admissible range, ...).
class DegenerateInstance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct EnumerationLimits {
  std::size_t max_files = 20;
  std::uint64_t max_good_pairs = 100'000'000;
};

/// Result of enumerating every nonempty feasible cache of a small instance.
struct CombinationSummary {
  double r_opt = 0.0;
  double alpha = 1.0;
  std::uint64_t num_feasible = 0;
  std::uint64_t num_good = 0;
  std::uint64_t num_bad = 0;
  double min_bad_reward = 0.0;
  double max_bad_reward = 0.0;
  std::uint64_t max_fill = 0;         // M_u
  std::uint64_t max_good_switch = 0;  // M_l
};

CombinationSummary enumerate_combinations(const Catalog& catalog,
                                          const PopularityProfile& profile,
                                          double alpha,
                                          EnumerationLimits limits = {});

/// Partial sum 2 sum_{j<=J} Delta(j)/n_j^2 and an upper bound on the rest.
struct K1Series {
  double partial = 0.0;
  double tail_bound = 0.0;
  std::uint64_t terms = 0;
};

/// Sums the first `terms` switching periods. The tail uses
/// Delta(j)/n_j^2 <= (1 + eps) int_{n_j}^{n_{j+1}} dx/x^2 with
/// eps >= Delta(j)/n_j for every remaining j.
K1Series k1_series(const SwitchingSchedule& schedule, std::uint64_t terms);

/// pi^2/3 + 4.12 gamma (sqrt), pi^2/(3L) (constant L), pi^2/3 (every period).
double k1_closed_form(const SwitchingSchedule& schedule);

struct BoundConstants {
  std::size_t num_files = 0;
  double r_opt = 0.0;
  double alpha = 1.0;
  double delta_u = 0.0;
  double delta_l = 0.0;
  double m_u = 0.0;
  double m_l = 0.0;
  double capacity = 0.0;  // M, reported next to M_u
  double k1 = 0.0;        // closed form
  K1Series k1_check;
  double g_inv_slope = 0.0;  // g^-1(x) = x * g_inv_slope = x / (U M)
  double c = 0.0;            // sqrt schedules only, else NaN
  SwitchingSchedule schedule = SwitchingSchedule::every_period(0);

  double g_inv(double x) const { return x * g_inv_slope; }
  /// l_t = 6 log t / g^-1(Delta_l)^2.
  double l(double t) const;
};

BoundConstants compute_bound_constants(const Catalog& catalog,
                                       const PopularityProfile& profile,
                                       double alpha,
                                       const SwitchingSchedule& schedule,
                                       EnumerationLimits limits = {});

/// C = 2 (M_u - M_l) F [6 log(F+1) / (g^-1(Delta_l)^2 ceil(gamma sqrt(F+1)))
///     + 1 + pi^2/6 + gamma + (pi^2/3 + 4.12 gamma)/Delta(2) - 1/Delta(1)]
///     + F M_u - M_l.
double constant_c(const BoundConstants& constants, double gamma);

struct Theorem1Params {
  double w = 1.0;
  double gamma = 2.0;
  double beta = 1.0;
};

/// Regret bound of the sqrt schedule.
double theorem1_bound(const BoundConstants& constants,
                      const Theorem1Params& params, double t);

struct Theorem2Params {
  double w = 1.0;
  std::uint64_t lockup = 1;
};

/// Regret bound of the constant schedule with an exact solver.
double theorem2_bound(const BoundConstants& constants,
                      const Theorem2Params& params, double t);

/// (1 - beta)(t - F) + F (K_1 + l_t + max_{j<=b} Delta(j)), where the max
/// is zero before the first switching period.
double bad_period_rhs(const BoundConstants& constants, double beta,
                      std::uint64_t t);

struct BadPeriodCheck {
  bool passed = true;
  std::uint64_t first_violation = 0;  // 0 when passed
  double worst_ratio = 0.0;           // max over checkpoints of mean / rhs
};

/// Compares seed-averaged N_bar_t at each checkpoint with the right-hand side.
BadPeriodCheck bad_period_bound_check(std::span<const std::uint64_t> checkpoints,
                                      std::span<const double> mean_bad_periods,
                                      const BoundConstants& constants,
                                      double beta);

}  // namespace cachebandit
