#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cachebandit/catalog.hpp"
#include "cachebandit/policies.hpp"
#include "cachebandit/spo.hpp"

namespace cachebandit {

struct PeriodRecord {
  std::uint64_t t = 0;
  std::uint32_t cache_id = 0;  // index into EpisodeTrace::caches
  double reward = 0.0;         // sum_{f cached} U d_f S_f
  double cost = 0.0;           // sum of sizes newly placed this period
  std::uint32_t num_users = 0;
  double requested_total = 0.0;  // sum over all files of U d_f S_f
  std::uint64_t cache_used = 0;
  std::uint32_t num_switched_files = 0;
};

/// Sparse per-period requests, kept only when a trace is asked to retain them.
struct RequestLog {
  std::vector<std::pair<FileId, std::uint32_t>> requests;
};

/// Result of one episode. Distinct cache contents are stored once, in the
/// order the trajectory visits them; records point into `caches`.
struct EpisodeTrace {
  std::string policy;
  std::uint64_t seed = 0;
  std::string config_fingerprint;
  std::vector<CacheContent> caches;
  std::vector<PeriodRecord> records;
  std::vector<RequestLog> demands;  // empty unless retained

  std::size_t size() const { return records.size(); }
  const CacheContent& cache_at(std::size_t i) const {
    return caches[records[i].cache_id];
  }
};

/// Independent random streams of one episode. Demand draws depend only on
/// the episode seed, so policies run with the same seed see identical demand.
struct RngStreams {
  Rng demand;
  Rng policy;

  static RngStreams derive(std::uint64_t seed, std::string_view policy_name);
};

/// One period: the policy picks M^t (paying S_f for every f not in M^{t-1}),
/// demand is realized, reward accrues, and the policy observes cached files.
/// `demand` is scratch storage that holds the realized demand afterwards.
PeriodRecord step(Policy& policy, const CacheContent& previous,
                  const Catalog& catalog, const DemandSource& demand_source,
                  std::uint64_t t, RngStreams& rng, DemandVector& demand);

/// Everything an episode needs besides the policy and seed.
struct Scenario {
  Catalog catalog;
  PopularityProfile profile;
  double zipf_rho = 0.0;
  SolverOptions solver;
  std::uint64_t horizon = 0;
  std::string fingerprint;
};

struct EpisodeOptions {
  bool keep_demand = false;
};

EpisodeTrace run_episode(const Scenario& scenario, const PolicySpec& spec,
                         std::uint64_t seed, EpisodeOptions options = {});

/// Lower-level form taking a caller-provided policy and demand source.
EpisodeTrace run_episode(Policy& policy, const std::string& policy_name,
                         const Catalog& catalog, const DemandSource& demand,
                         std::uint64_t horizon, std::uint64_t seed,
                         EpisodeOptions options = {});

/// One CSV row per period: t, policy, seed, num_users, reward, cost,
/// requested_total, cache_used, num_switched_files.
void write_trace_csv(std::ostream& out, const EpisodeTrace& trace);

}  // namespace cachebandit
