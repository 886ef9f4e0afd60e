#include "cachebandit/metrics.hpp"

#include <algorithm>

namespace cachebandit {

namespace {

void check_profile(const EpisodeTrace& trace, const PopularityProfile& profile,
                   const Catalog& catalog) {
  if (profile.num_files() != catalog.num_files()) {
    throw std::invalid_argument("profile and catalog disagree on F");
  }
  for (const CacheContent& cache : trace.caches) {
    if (!cache.files.empty() && cache.files.back() >= catalog.num_files()) {
      throw std::invalid_argument("trace caches a file outside the catalog");
    }
  }
}

std::vector<double> cache_rewards(const EpisodeTrace& trace,
                                  const PopularityProfile& profile,
                                  const Catalog& catalog) {
  std::vector<double> rewards;
  rewards.reserve(trace.caches.size());
  for (const CacheContent& cache : trace.caches) {
    rewards.push_back(expected_reward(cache, profile.theta, catalog));
  }
  return rewards;
}

}  // namespace

std::vector<double> sampling_regret(const EpisodeTrace& trace,
                                    const RegretReference& reference,
                                    const PopularityProfile& profile,
                                    const Catalog& catalog) {
  check_profile(trace, profile, catalog);
  const std::vector<double> rewards = cache_rewards(trace, profile, catalog);
  const double target = reference.alpha * reference.beta * reference.r_opt;
  std::vector<double> out(trace.size());
  long double collected = 0.0L;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    collected += rewards[trace.records[i].cache_id];
    const long double t = static_cast<long double>(i + 1);
    out[i] = static_cast<double>(t * target - collected);
  }
  return out;
}

std::vector<double> switching_regret(const EpisodeTrace& trace,
                                     std::uint64_t capacity) {
  std::vector<double> out(trace.size());
  double cost = 0.0;  // integer valued, exact below 2^53
  for (std::size_t i = 0; i < trace.size(); ++i) {
    cost += trace.records[i].cost;
    out[i] = cost - static_cast<double>(capacity);
  }
  return out;
}

RegretLedger compute_regret(const EpisodeTrace& trace,
                            const RegretReference& reference,
                            const PopularityProfile& profile,
                            const Catalog& catalog, double w) {
  RegretLedger ledger;
  ledger.r_opt = reference.r_opt;
  ledger.alpha = reference.alpha;
  ledger.beta = reference.beta;
  ledger.w = w;
  ledger.sampling_regret = sampling_regret(trace, reference, profile, catalog);
  ledger.switching_regret = switching_regret(trace, catalog.capacity());
  ledger.total_regret.resize(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    ledger.total_regret[i] =
        ledger.sampling_regret[i] + w * ledger.switching_regret[i];
  }
  for (const PeriodRecord& r : trace.records) {
    ledger.cum_reward += r.reward;
    ledger.cum_cost += r.cost;
  }
  return ledger;
}

double cache_efficiency(const EpisodeTrace& trace, double w) {
  double reward = 0.0;
  double cost = 0.0;
  double requested = 0.0;
  for (const PeriodRecord& r : trace.records) {
    reward += r.reward;
    cost += r.cost;
    requested += r.requested_total;
  }
  if (!(requested > 0.0)) {
    throw UndefinedEfficiency("cache efficiency undefined: nothing was requested");
  }
  return (reward - w * cost) / requested;
}

Combination classify_good_bad(const CacheContent& cache,
                              const PopularityProfile& profile,
                              const Catalog& catalog, double alpha,
                              double r_opt) {
  return expected_reward(cache, profile.theta, catalog) >= alpha * r_opt
             ? Combination::kGood
             : Combination::kBad;
}

void BadPeriodCounters::record_bad(const CacheContent& cache) {
  ++total_;
  if (cache.files.empty()) {
    ++unattributed_;
    return;
  }
  FileId pick = cache.files.front();
  for (FileId f : cache.files) {
    if (counts_[f] < counts_[pick]) pick = f;
  }
  ++counts_[pick];
}

std::vector<std::uint64_t> bad_period_series(const EpisodeTrace& trace,
                                             const PopularityProfile& profile,
                                             const Catalog& catalog,
                                             double alpha, double r_opt,
                                             BadPeriodCounters* final_counters) {
  check_profile(trace, profile, catalog);
  std::vector<bool> bad(trace.caches.size());
  for (std::size_t c = 0; c < trace.caches.size(); ++c) {
    bad[c] = classify_good_bad(trace.caches[c], profile, catalog, alpha,
                               r_opt) == Combination::kBad;
  }
  BadPeriodCounters counters(catalog.num_files());
  std::vector<std::uint64_t> out(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::uint32_t id = trace.records[i].cache_id;
    if (bad[id]) counters.record_bad(trace.caches[id]);
    out[i] = counters.total();
  }
  if (final_counters) *final_counters = std::move(counters);
  return out;
}

}  // namespace cachebandit
