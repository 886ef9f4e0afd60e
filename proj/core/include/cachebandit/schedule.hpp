#pragma once

#include <cstddef>
#include <cstdint>

namespace cachebandit {

/// Switching periods n_1 < n_2 < ... of a lock-up bandit policy. The first
/// switching period follows the F initialization periods, n_1 = F + 1, and
/// the gap Delta(b) = n_{b+1} - n_b is 1, a constant L, or ceil(gamma sqrt(n_b)).
class SwitchingSchedule {
 public:
  enum class Kind { kEveryPeriod, kConstant, kSqrt };

  static SwitchingSchedule every_period(std::size_t num_files);
  static SwitchingSchedule constant(std::size_t num_files, std::uint64_t gap);
  static SwitchingSchedule sqrt_growth(std::size_t num_files, double gamma);

  Kind kind() const { return kind_; }
  std::uint64_t constant_gap() const { return gap_; }
  double gamma() const { return gamma_; }
  std::size_t num_files() const { return num_files_; }

  /// Active switching period n_b.
  std::uint64_t current() const { return current_; }
  /// Switching-period counter b (1-based).
  std::uint64_t index() const { return index_; }
  /// Delta(b) for the active switching period.
  std::uint64_t gap() const { return gap_at(current_); }
  /// Gap that would follow a switching period at `n`.
  std::uint64_t gap_at(std::uint64_t n) const;

  void advance();

  /// Largest gap among switching periods 1..b where n_b <= t < n_{b+1};
  /// zero while t is still in the initialization phase.
  std::uint64_t max_gap_until(std::uint64_t t) const;

  /// Number of switching periods b with n_b <= t.
  std::uint64_t periods_until(std::uint64_t t) const;

 private:
  SwitchingSchedule(Kind kind, std::size_t num_files, std::uint64_t gap,
                    double gamma);

  Kind kind_;
  std::size_t num_files_;
  std::uint64_t gap_;
  double gamma_;
  std::uint64_t current_;
  std::uint64_t index_ = 1;
};

/// Admissible gamma range for the sqrt schedule's regret guarantee:
/// [2 + 1/sqrt(F+1), (F^2 + F - 1)/sqrt(F+1)].
double sqrt_gamma_lower(std::size_t num_files);
double sqrt_gamma_upper(std::size_t num_files);
bool sqrt_gamma_admissible(std::size_t num_files, double gamma);

}  // namespace cachebandit
