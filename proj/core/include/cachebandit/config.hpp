#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cachebandit/catalog.hpp"
#include "cachebandit/policies.hpp"
#include "cachebandit/spo.hpp"

namespace cachebandit {

/// Cache capacity, either in storage units or as a percentage of the catalog.
struct CapacitySpec {
  bool relative = false;
  double value = 0.0;

  std::uint64_t resolve(std::uint64_t total_size) const;
};

enum class SweepAxis { kNone, kRho, kCapacity, kMeanUsers, kNumFiles };

std::string_view sweep_axis_name(SweepAxis axis);

struct ExperimentConfig {
  // catalog
  std::vector<SizeClass> size_classes;
  std::vector<std::uint32_t> sizes;  // explicit sizes override size_classes
  std::size_t num_files = 0;         // 0: sum of the class counts
  SizeLayout size_layout = SizeLayout::kRoundRobinDescending;
  CapacitySpec capacity;
  std::uint32_t max_users = 50;
  double zipf_rho = 0.56;

  // run
  std::uint64_t horizon = 1000;
  std::uint64_t replicates = 1;
  double w = 1.0;
  PolicyParams policy_defaults;
  std::vector<PolicySpec> policies;
  SolverOptions solver;

  // sweep and output
  SweepAxis sweep = SweepAxis::kNone;
  std::vector<std::string> sweep_values;  // validated tokens
  std::uint64_t seed = 1;
  bool full_resolution = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Parses flat `key = value` text. '#' starts a comment. Errors name the
/// origin, line and key.
ExperimentConfig parse_config(std::string_view text,
                              std::string_view origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Comma separated list such as "cucb, cucbsc-L(L=5), eps-greedy(epsilon=0.2)".
/// Parameters not given fall back to `defaults`.
std::vector<PolicySpec> parse_policy_list(std::string_view text,
                                          const PolicyParams& defaults);

void validate_config(const ExperimentConfig& config);

/// Value parsers shared with sweep handling; they throw ConfigError.
double parse_real(std::string_view text);
std::uint64_t parse_count(std::string_view text);
CapacitySpec parse_capacity(std::string_view text);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
/// `include_runtime` adds settings that do not affect results (threads).
std::string format_config(const ExperimentConfig& config,
                          bool include_runtime = true);

/// FNV-1a hex digest of the canonical form without runtime settings.
std::string config_fingerprint(const ExperimentConfig& config);

/// Sizes before any sweep is applied.
std::vector<std::uint32_t> base_sizes(const ExperimentConfig& config);

/// F = 400 files (sizes 2^0..2^7, 50 each), M = 512, U = 50, rho = 0.56,
/// w = 1, N = 5e4, R = 500 and the nine compared policies.
ExperimentConfig default_paper_config();

}  // namespace cachebandit
