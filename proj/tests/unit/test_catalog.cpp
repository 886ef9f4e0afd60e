#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cachebandit/catalog.hpp"
#include "oracle.hpp"

using namespace cachebandit;

TEST(Catalog, RejectsEmptyAndZeroSizes) {
  EXPECT_THROW(Catalog({}, 4, 10), std::invalid_argument);
  EXPECT_THROW(Catalog({1, 0}, 4, 10), std::invalid_argument);
  EXPECT_THROW(Catalog({1}, 0, 10), std::invalid_argument);
}

TEST(Catalog, FilesLargerThanCapacityAreAllowed) {
  const Catalog c({1, 9, 2}, 4, 10);
  EXPECT_EQ(c.total_size(), 12u);
  EXPECT_EQ(c.max_file_size(), 9u);
}

TEST(Catalog, DefaultLayoutInterleavesClasses) {
  std::vector<SizeClass> classes;
  for (std::uint32_t i = 0; i < 8; ++i) classes.push_back({1u << i, 50});
  const auto sizes = layout_sizes(classes, SizeLayout::kRoundRobinDescending);
  ASSERT_EQ(sizes.size(), 400u);
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), 0ULL), 12750ULL);
  EXPECT_EQ(sizes[0], 128u);
  EXPECT_EQ(sizes[7], 1u);
  EXPECT_EQ(sizes[8], 128u);
  const auto asc = layout_sizes(classes, SizeLayout::kRoundRobinAscending);
  EXPECT_EQ(asc[0], 1u);
  EXPECT_EQ(asc[7], 128u);
  const auto blocked = layout_sizes(classes, SizeLayout::kBlocked);
  EXPECT_EQ(blocked[49], 1u);
  EXPECT_EQ(blocked[50], 2u);
}

TEST(Zipf, TwoFilesRhoOne) {
  const auto p = build_zipf_profile(2, 1.0, 10.0, 10);
  EXPECT_NEAR(p.request_probs[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.request_probs[1], 1.0 / 3.0, 1e-15);
}

TEST(Zipf, UniformWhenRhoZero) {
  const auto p = build_zipf_profile(5, 0.0, 25.0, 50);
  for (double q : p.request_probs) EXPECT_NEAR(q, 0.2, 1e-15);
  for (double th : p.theta) EXPECT_NEAR(th, 0.5 * 0.2, 1e-15);
}

TEST(Zipf, HeadAgainstLongDoubleSeries) {
  const auto p = build_zipf_profile(400, 0.56, 25.0, 50);
  EXPECT_NEAR(p.request_probs[0], static_cast<double>(oracle::zipf_head(400, 0.56)),
              1e-13);
  EXPECT_NEAR(std::accumulate(p.request_probs.begin(), p.request_probs.end(), 0.0),
              1.0, 1e-12);
}

TEST(Zipf, ThetaIdentity) {
  const auto p = build_zipf_profile(50, 0.8, 7.5, 30);
  for (std::size_t f = 0; f < 50; ++f) {
    EXPECT_DOUBLE_EQ(p.theta[f], 7.5 / 30.0 * p.request_probs[f]);
  }
}

TEST(Zipf, HeadMassGrowsWithSkew) {
  double prev = 0.0;
  for (double rho = 0.0; rho <= 3.0; rho += 0.25) {
    const double head = build_zipf_profile(100, rho, 5.0, 10).request_probs[0];
    EXPECT_GE(head, prev);
    prev = head;
  }
}

TEST(Zipf, RejectsBadArguments) {
  EXPECT_THROW(build_zipf_profile(0, 0.5, 1.0, 2), std::invalid_argument);
  EXPECT_THROW(build_zipf_profile(3, 0.5, 3.0, 2), std::invalid_argument);
  EXPECT_THROW(build_zipf_profile(3, 0.5, -1.0, 2), std::invalid_argument);
  EXPECT_THROW(build_zipf_profile(3, -0.1, 1.0, 2), std::invalid_argument);
}

TEST(Demand, NoUsersGivesZeroDemand) {
  const Catalog c({1, 1, 1}, 2, 0);
  const auto p = build_zipf_profile(3, 0.5, 0.0, 0);
  Rng rng(3);
  const auto d = sample_demand(p, c, rng);
  EXPECT_EQ(d.num_users(), 0u);
  for (FileId f = 0; f < 3; ++f) EXPECT_EQ(d.d(f), 0.0);
}

TEST(Demand, PointMassGoesToOneFile) {
  const Catalog c({1, 1, 1}, 2, 20);
  const auto p = make_profile({1.0, 0.0, 0.0}, 10.0, 20);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto d = sample_demand(p, c, rng);
    EXPECT_DOUBLE_EQ(d.d(0), d.num_users() / 20.0);
    EXPECT_EQ(d.requests(1), 0u);
    EXPECT_EQ(d.requests(2), 0u);
  }
}

TEST(Demand, CountsAddUpToUsers) {
  const Catalog c(std::vector<std::uint32_t>(40, 1), 5, 50);
  const auto p = build_zipf_profile(40, 0.56, 25.0, 50);
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto d = sample_demand(p, c, rng);
    std::uint64_t sum = 0;
    for (FileId f = 0; f < 40; ++f) {
      sum += d.requests(f);
      EXPECT_GE(d.d(f), 0.0);
      EXPECT_LE(d.d(f), 1.0);
    }
    EXPECT_EQ(sum, d.num_users());
    EXPECT_LE(d.num_users(), 50u);
  }
}

TEST(Demand, MonteCarloMeanMatchesTheta) {
  const Catalog c({1, 1, 1}, 1, 50);
  const auto p = build_zipf_profile(3, 0.0, 25.0, 50);
  Rng rng(2024);
  constexpr int kPeriods = 100000;
  std::vector<double> sum(3, 0.0), sum2(3, 0.0);
  for (int i = 0; i < kPeriods; ++i) {
    const auto d = sample_demand(p, c, rng);
    for (FileId f = 0; f < 3; ++f) {
      sum[f] += d.d(f);
      sum2[f] += d.d(f) * d.d(f);
    }
  }
  for (FileId f = 0; f < 3; ++f) {
    const double mean = sum[f] / kPeriods;
    const double var = sum2[f] / kPeriods - mean * mean;
    const double se = std::sqrt(var / kPeriods);
    EXPECT_NEAR(mean, 0.5 / 3.0, 3.0 * se) << "file " << f;
  }
}

TEST(Demand, UserCountIsUniform) {
  const Catalog c({1}, 1, 4);
  const auto p = build_zipf_profile(1, 0.0, 2.0, 4);
  Rng rng(8);
  std::vector<int> hist(5, 0);
  constexpr int kPeriods = 50000;
  for (int i = 0; i < kPeriods; ++i) ++hist[sample_demand(p, c, rng).num_users()];
  for (int h : hist) {
    const double sd = std::sqrt(kPeriods * 0.2 * 0.8);
    EXPECT_NEAR(h, kPeriods * 0.2, 4.0 * sd);
  }
}
