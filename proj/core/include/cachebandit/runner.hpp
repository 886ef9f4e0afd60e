#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cachebandit/bounds.hpp"
#include "cachebandit/config.hpp"
#include "cachebandit/metrics.hpp"
#include "cachebandit/simulator.hpp"

namespace cachebandit {

/// Streaming mean/variance; NaN samples are skipped. Merging is order
/// sensitive in the last bits, so callers merge in a fixed order.
struct RunningStat {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningStat& other);
  /// Standard error of the mean; NaN for fewer than two samples.
  double se() const;
  double value() const;  // mean, or NaN when empty
};

/// Periods at which per-period aggregates are kept: every t <= 1000, then
/// every 10th, always including the horizon. `full` keeps every period.
std::vector<std::uint64_t> checkpoint_grid(std::uint64_t horizon, bool full);

/// Seed of replicate `replicate` at sweep point `point`. It does not depend
/// on the policy, so all policies of a replicate see the same demand.
std::uint64_t episode_seed(std::uint64_t seed_base, std::size_t point,
                           std::uint64_t replicate);

std::size_t num_sweep_points(const ExperimentConfig& config);

/// Catalog, profile and solver of one sweep point.
Scenario build_scenario(const ExperimentConfig& config, std::size_t point);

/// alpha * beta * r_opt reference of a scenario. r_opt comes from the exact
/// solver when it fits the table budget; with the greedy solver alpha is
/// measured, otherwise alpha = 1 and r_opt is the greedy reward.
struct ReferenceInfo {
  RegretReference reference;
  bool exact = true;
};
ReferenceInfo regret_reference(const Scenario& scenario);

/// Theorem bound applicable to a policy on a scenario, if any.
struct PolicyBound {
  std::optional<BoundConstants> constants;
  enum class Form { kNone, kTheorem1, kTheorem2 } form = Form::kNone;
  double beta = 1.0;
  double w = 1.0;
  double gamma = 0.0;
  std::uint64_t lockup = 1;
  std::string note;

  /// NaN when no bound applies.
  double evaluate(double t) const;
};
PolicyBound policy_bound(const Scenario& scenario, const PolicySpec& spec,
                         const ReferenceInfo& reference, double w);

struct CheckpointStats {
  RunningStat sampling;
  RunningStat switching;
  RunningStat total;
  RunningStat efficiency;  // cumulative efficiency up to t
};

struct CellResult {
  std::size_t point = 0;
  std::size_t policy = 0;
  std::string label;
  std::vector<CheckpointStats> checkpoints;
  std::vector<double> bound;  // per checkpoint, NaN when not applicable
  // Per-replicate values at the horizon, in replicate order.
  std::vector<double> final_efficiency;
  std::vector<double> final_sampling;
  std::vector<double> final_switching;
  std::vector<double> final_total;

  RunningStat efficiency() const;
};

struct PointInfo {
  std::string sweep_value;  // empty without a sweep
  std::size_t num_files = 0;
  std::uint64_t capacity = 0;
  std::uint64_t total_size = 0;
  std::uint32_t max_users = 0;
  double mean_users = 0.0;
  double zipf_rho = 0.0;
  ReferenceInfo reference;
  std::vector<PolicyBound> bounds;  // one per policy
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string fingerprint;
  std::string config_text;
  std::vector<std::uint64_t> checkpoints;
  std::vector<PointInfo> points;
  std::vector<CellResult> cells;  // ordered by (point, policy)
  std::vector<std::string> warnings;

  const CellResult& cell(std::size_t point, std::size_t policy) const;
};

struct RunOptions {
  std::ostream* log = nullptr;
  std::size_t chunk_size = 16;  // replicates per work item
};

/// Runs every (sweep point, policy, replicate) episode on a thread pool.
/// Results are folded in a fixed order, so they do not depend on the
/// number of threads.
ExperimentResult simulate_experiment(const ExperimentConfig& config,
                                     const RunOptions& options = {});

/// Writes metrics.csv, sweep.csv and metadata.json into `dir`.
void write_experiment(const ExperimentResult& result,
                      const std::filesystem::path& dir);

void write_metrics_csv(std::ostream& out, const ExperimentResult& result);
void write_sweep_csv(std::ostream& out, const ExperimentResult& result);
std::string metadata_json(const ExperimentResult& result);

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const RunOptions& options = {});

/// Bound table for the first sweep point: t, policy, theorem_bound,
/// bad_period_rhs, for t on a roughly logarithmic grid up to t_max.
void write_bounds_table(std::ostream& out, const ExperimentConfig& config,
                        std::uint64_t t_max);

}  // namespace cachebandit
