#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cachebandit/runner.hpp"

using namespace cachebandit;

namespace {

ExperimentConfig small_config() {
  return parse_config(R"(
sizes = 1, 1, 2, 2, 3
capacity = 4
max_users = 10
zipf_rho = 0.8
horizon = 300
replicates = 37
solver = exact
policies = cucb, cucbsc-L(L=5), cucbsc-sqrt(gamma=3), delta-myopic, iub
)");
}

std::string render(const ExperimentResult& r) {
  std::ostringstream out;
  write_metrics_csv(out, r);
  write_sweep_csv(out, r);
  out << metadata_json(r);
  return out.str();
}

std::size_t rows(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(RunningStat, MergeMatchesSequential) {
  RunningStat all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i) * 10.0;
    all.add(x);
    (i < 40 ? a : b).add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.n, all.n);
  EXPECT_NEAR(a.mean, all.mean, 1e-12);
  EXPECT_NEAR(a.se(), all.se(), 1e-12);
  RunningStat nan;
  nan.add(std::nan(""));
  EXPECT_EQ(nan.n, 0u);
  EXPECT_TRUE(std::isnan(nan.value()));
}

TEST(Runner, CheckpointGrid) {
  const auto grid = checkpoint_grid(50000, false);
  EXPECT_EQ(grid.front(), 1u);
  EXPECT_EQ(grid[999], 1000u);
  EXPECT_EQ(grid[1000], 1010u);
  EXPECT_EQ(grid.back(), 50000u);
  EXPECT_EQ(grid.size(), 1000u + 4900u);
  const auto odd = checkpoint_grid(1005, false);
  EXPECT_EQ(odd.back(), 1005u);
  EXPECT_EQ(checkpoint_grid(1005, true).size(), 1005u);
}

TEST(Runner, SeedsIgnorePolicy) {
  EXPECT_EQ(episode_seed(1, 0, 3), episode_seed(1, 0, 3));
  EXPECT_NE(episode_seed(1, 0, 3), episode_seed(1, 1, 3));
  EXPECT_NE(episode_seed(1, 0, 3), episode_seed(1, 0, 4));
  EXPECT_NE(episode_seed(1, 0, 3), episode_seed(2, 0, 3));
}

TEST(Runner, ThreadCountDoesNotChangeOutput) {
  auto config = small_config();
  std::string reference;
  for (unsigned threads : {1u, 2u, 5u}) {
    config.threads = threads;
    const std::string text = render(simulate_experiment(config));
    if (reference.empty()) reference = text;
    EXPECT_EQ(text, reference) << threads << " threads";
  }
}

TEST(Runner, RepeatedRunsAreByteIdentical) {
  const auto dir = std::filesystem::temp_directory_path() / "cachebandit_runner_test";
  std::filesystem::remove_all(dir);
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto config = small_config();
  run_experiment(config, dir / "a");
  run_experiment(config, dir / "b");
  for (const char* name : {"metrics.csv", "sweep.csv", "metadata.json"}) {
    EXPECT_EQ(read(dir / "a" / name), read(dir / "b" / name)) << name;
    EXPECT_FALSE(read(dir / "a" / name).empty());
  }
  std::filesystem::remove_all(dir);
}

TEST(Runner, TenPeriodsGiveTenRows) {
  auto config = small_config();
  config.horizon = 10;
  config.replicates = 1;
  config.policies = parse_policy_list("cucb", config.policy_defaults);
  std::ostringstream out;
  write_metrics_csv(out, simulate_experiment(config));
  EXPECT_EQ(rows(out.str()), 1u + 10u);
  EXPECT_EQ(out.str().rfind("t,policy,sweep_value,", 0), 0u);
}

TEST(Runner, SweepRowsAreGridTimesPolicies) {
  auto config = small_config();
  config.horizon = 50;
  config.replicates = 3;
  config.sweep = SweepAxis::kRho;
  config.sweep_values = {"0", "0.5", "1", "2"};
  const auto result = simulate_experiment(config);
  std::ostringstream out;
  write_sweep_csv(out, result);
  EXPECT_EQ(rows(out.str()), 1u + 4u * 5u);
  EXPECT_EQ(result.points.size(), 4u);
  EXPECT_EQ(result.points[3].zipf_rho, 2.0);
}

TEST(Runner, FingerprintInEveryOutput) {
  const auto result = simulate_experiment(small_config());
  std::ostringstream metrics, sweep;
  write_metrics_csv(metrics, result);
  write_sweep_csv(sweep, result);
  std::istringstream lines(metrics.str() + sweep.str());
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("t,", 0) == 0 || line.rfind("sweep_axis,", 0) == 0) continue;
    EXPECT_NE(line.find(result.fingerprint), std::string::npos) << line;
  }
  const auto meta = nlohmann::json::parse(metadata_json(result));
  EXPECT_EQ(meta.at("config_fingerprint").get<std::string>(), result.fingerprint);
}

TEST(Runner, SweepScenarios) {
  auto config = default_paper_config();
  config.sweep = SweepAxis::kNumFiles;
  config.sweep_values = {"100", "800"};
  const auto a = build_scenario(config, 0);
  const auto b = build_scenario(config, 1);
  EXPECT_EQ(a.catalog.num_files(), 100u);
  EXPECT_EQ(b.catalog.num_files(), 800u);
  EXPECT_NEAR(a.catalog.relative_capacity(), 512.0 / 12750.0, 0.002);
  EXPECT_NEAR(b.catalog.relative_capacity(), 512.0 / 12750.0, 0.0005);

  config.sweep = SweepAxis::kMeanUsers;
  config.sweep_values = {"1", "2.5"};
  EXPECT_EQ(build_scenario(config, 0).catalog.max_users(), 2u);
  EXPECT_EQ(build_scenario(config, 1).profile.mean_users, 2.5);

  config.sweep = SweepAxis::kCapacity;
  config.sweep_values = {"2%", "1000"};
  EXPECT_EQ(build_scenario(config, 0).catalog.capacity(), 255u);
  EXPECT_EQ(build_scenario(config, 1).catalog.capacity(), 1000u);
}

TEST(Runner, IubRegretIsZeroWithExactSolver) {
  auto config = small_config();
  config.policies = parse_policy_list("iub", config.policy_defaults);
  const auto result = simulate_experiment(config);
  for (const auto& cp : result.cell(0, 0).checkpoints) EXPECT_EQ(cp.sampling.mean, 0.0);
}

TEST(Runner, BoundsOnlyForCucbFamily) {
  const auto result = simulate_experiment(small_config());
  const auto& bounds = result.points[0].bounds;
  EXPECT_EQ(bounds[1].form, PolicyBound::Form::kTheorem2);
  EXPECT_EQ(bounds[2].form, PolicyBound::Form::kTheorem1);
  EXPECT_EQ(bounds[3].form, PolicyBound::Form::kNone);
  EXPECT_TRUE(std::isnan(result.cell(0, 3).bound.back()));
  EXPECT_FALSE(std::isnan(result.cell(0, 1).bound.back()));
}

TEST(Runner, InvalidPolicyForInstanceIsAConfigError) {
  auto config = parse_config("sizes = 1, 9\ncapacity = 4\npolicies = cucb\n");
  EXPECT_THROW(simulate_experiment(config), ConfigError);
}
