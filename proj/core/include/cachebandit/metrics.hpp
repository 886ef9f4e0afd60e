#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cachebandit/catalog.hpp"
#include "cachebandit/simulator.hpp"
#include "cachebandit/spo.hpp"

namespace cachebandit {

/// Benchmark the regret is measured against: alpha * beta * r_opt per period.
struct RegretReference {
  double r_opt = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Regret decomposition of one trace; series are indexed by t - 1.
struct RegretLedger {
  double cum_reward = 0.0;  // realized (sampled) reward
  double cum_cost = 0.0;
  double r_opt = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double w = 1.0;
  std::vector<double> sampling_regret;
  std::vector<double> switching_regret;
  std::vector<double> total_regret;
};

/// R_Sa(t) = t alpha beta r_opt - sum_{i<=t} r_Theta(M^i), with r_Theta the
/// expected reward of the realized cache under the true profile.
std::vector<double> sampling_regret(const EpisodeTrace& trace,
                                    const RegretReference& reference,
                                    const PopularityProfile& profile,
                                    const Catalog& catalog);

/// R_Sw(t) = cumulative replacement cost up to t minus M.
std::vector<double> switching_regret(const EpisodeTrace& trace,
                                     std::uint64_t capacity);

/// Both series plus total = sampling + w * switching.
RegretLedger compute_regret(const EpisodeTrace& trace,
                            const RegretReference& reference,
                            const PopularityProfile& profile,
                            const Catalog& catalog, double w);

class UndefinedEfficiency : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (sum reward - w sum cost) / sum requested, as a fraction.
double cache_efficiency(const EpisodeTrace& trace, double w);

enum class Combination { kGood, kBad };

/// Good iff r_Theta(cache) >= alpha r_opt.
Combination classify_good_bad(const CacheContent& cache,
                              const PopularityProfile& profile,
                              const Catalog& catalog, double alpha,
                              double r_opt);

/// Per-arm counters advanced only on bad periods. Each bad period increments
/// the cached arm with the smallest counter (lowest index on ties); a bad
/// period with an empty cache goes to a separate unattributed counter so that
/// the total always equals the number of bad periods.
class BadPeriodCounters {
 public:
  explicit BadPeriodCounters(std::size_t num_files = 0)
      : counts_(num_files, 0) {}

  void record_bad(const CacheContent& cache);

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t unattributed() const { return unattributed_; }
  std::uint64_t total() const { return total_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t unattributed_ = 0;
  std::uint64_t total_ = 0;
};

/// N_bar_t = sum_f N_{f,t} for t = 1..size(trace).
std::vector<std::uint64_t> bad_period_series(const EpisodeTrace& trace,
                                             const PopularityProfile& profile,
                                             const Catalog& catalog,
                                             double alpha, double r_opt,
                                             BadPeriodCounters* final_counters =
                                                 nullptr);

}  // namespace cachebandit
