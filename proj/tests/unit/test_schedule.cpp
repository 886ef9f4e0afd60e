#include <gtest/gtest.h>

#include <cmath>

#include "cachebandit/schedule.hpp"

using namespace cachebandit;

TEST(Schedule, SqrtFirstPeriods) {
  auto s = SwitchingSchedule::sqrt_growth(400, 2.0);
  EXPECT_EQ(s.current(), 401u);
  EXPECT_EQ(s.index(), 1u);
  EXPECT_EQ(s.gap(), 41u);
  s.advance();
  EXPECT_EQ(s.current(), 442u);
  EXPECT_EQ(s.index(), 2u);
}

TEST(Schedule, ConstantArithmetic) {
  auto s = SwitchingSchedule::constant(400, 10);
  for (std::uint64_t b = 1; b <= 50; ++b) {
    EXPECT_EQ(s.current(), 401 + 10 * (b - 1));
    s.advance();
  }
}

TEST(Schedule, EveryPeriod) {
  auto s = SwitchingSchedule::every_period(3);
  for (std::uint64_t n = 4; n < 20; ++n) {
    EXPECT_EQ(s.current(), n);
    EXPECT_EQ(s.gap(), 1u);
    s.advance();
  }
}

TEST(Schedule, RejectsBadParameters) {
  EXPECT_THROW(SwitchingSchedule::constant(3, 0), std::invalid_argument);
  EXPECT_THROW(SwitchingSchedule::sqrt_growth(3, 0.0), std::invalid_argument);
}

TEST(Schedule, PropertiesForGammaJustAboveLowerBound) {
  auto s = SwitchingSchedule::sqrt_growth(400, 2.05);
  double prev_ratio = INFINITY;
  for (std::uint64_t b = 1; b <= 10000; ++b) {
    const double ratio = static_cast<double>(s.gap()) / static_cast<double>(s.current());
    EXPECT_LE(ratio, prev_ratio) << "b=" << b;
    EXPECT_LE(static_cast<double>(b), std::sqrt(static_cast<double>(s.current())));
    prev_ratio = ratio;
    s.advance();
  }
}

TEST(Schedule, GammaRange) {
  EXPECT_NEAR(sqrt_gamma_lower(400), 2.0 + 1.0 / std::sqrt(401.0), 1e-15);
  EXPECT_NEAR(sqrt_gamma_upper(400), (400.0 * 400 + 400 - 1) / std::sqrt(401.0), 1e-9);
  EXPECT_FALSE(sqrt_gamma_admissible(400, 2.0));
  EXPECT_TRUE(sqrt_gamma_admissible(400, 2.05));
}

TEST(Schedule, PeriodCountingAndMaxGap) {
  auto s = SwitchingSchedule::sqrt_growth(10, 3.0);
  EXPECT_EQ(s.periods_until(10), 0u);
  EXPECT_EQ(s.max_gap_until(10), 0u);
  std::uint64_t max_gap = 0;
  auto walk = s;
  for (std::uint64_t b = 1; b <= 30; ++b) {
    max_gap = std::max(max_gap, walk.gap());
    EXPECT_EQ(s.periods_until(walk.current()), b);
    EXPECT_EQ(s.max_gap_until(walk.current()), max_gap);
    EXPECT_EQ(s.periods_until(walk.current() + walk.gap() - 1), b);
    walk.advance();
  }
}
