#include "cachebandit/simulator.hpp"

#include <ostream>

#include "cachebandit/csv.hpp"

namespace cachebandit {

RngStreams RngStreams::derive(std::uint64_t seed, std::string_view policy_name) {
  const std::uint64_t demand_seed = mix64(seed ^ 0x64656d616e64ULL);  // "demand"
  const std::uint64_t policy_seed = mix64(mix64(seed) ^ fnv1a(policy_name));
  return RngStreams{Rng(demand_seed), Rng(policy_seed)};
}

PeriodRecord step(Policy& policy, const CacheContent& previous,
                  const Catalog& catalog, const DemandSource& demand_source,
                  std::uint64_t t, RngStreams& rng, DemandVector& demand) {
  if (t == 0) throw std::invalid_argument("periods start at t = 1");
  const CacheContent& cache = policy.choose_cache(t, rng.policy);

  PeriodRecord record;
  record.t = t;
  record.cache_used = cache.used;
  record.cost = static_cast<double>(switch_cost(cache, previous, catalog.sizes()));
  record.num_switched_files = switched_files(cache, previous);

  demand_source.sample(demand, rng.demand);
  record.num_users = demand.num_users();

  // U d_f = requests_f, so both sums are exact integers.
  std::uint64_t requested = 0;
  const auto requests = demand.requests();
  for (std::size_t f = 0; f < requests.size(); ++f) {
    requested += static_cast<std::uint64_t>(requests[f]) * catalog.size(static_cast<FileId>(f));
  }
  std::uint64_t hits = 0;
  for (FileId f : cache.files) {
    hits += static_cast<std::uint64_t>(requests[f]) * catalog.size(f);
  }
  record.reward = static_cast<double>(hits);
  record.requested_total = static_cast<double>(requested);

  policy.observe(demand, catalog);
  return record;
}

EpisodeTrace run_episode(Policy& policy, const std::string& policy_name,
                         const Catalog& catalog, const DemandSource& demand_source,
                         std::uint64_t horizon, std::uint64_t seed,
                         EpisodeOptions options) {
  if (demand_source.num_files() != catalog.num_files()) {
    throw std::invalid_argument("demand source and catalog disagree on F");
  }
  EpisodeTrace trace;
  trace.policy = policy_name;
  trace.seed = seed;
  trace.records.reserve(horizon);
  if (options.keep_demand) trace.demands.reserve(horizon);

  RngStreams rng = RngStreams::derive(seed, policy_name);
  DemandVector demand(catalog.num_files(), catalog.max_users());
  CacheContent previous;  // M^0 is empty
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    PeriodRecord record =
        step(policy, previous, catalog, demand_source, t, rng, demand);
    const CacheContent& chosen = policy.current();
    if (trace.caches.empty() || !(trace.caches.back() == chosen)) {
      trace.caches.push_back(chosen);
      previous = chosen;
    }
    record.cache_id = static_cast<std::uint32_t>(trace.caches.size() - 1);
    trace.records.push_back(record);
    if (options.keep_demand) {
      RequestLog log;
      const auto requests = demand.requests();
      for (std::size_t f = 0; f < requests.size(); ++f) {
        if (requests[f] > 0) log.requests.emplace_back(static_cast<FileId>(f), requests[f]);
      }
      trace.demands.push_back(std::move(log));
    }
  }
  return trace;
}

EpisodeTrace run_episode(const Scenario& scenario, const PolicySpec& spec,
                         std::uint64_t seed, EpisodeOptions options) {
  PolicyContext context{scenario.catalog, scenario.profile, scenario.solver,
                        scenario.zipf_rho};
  std::unique_ptr<Policy> policy = make_policy(spec, context);
  UniformUsersDemand demand(scenario.profile);
  EpisodeTrace trace = run_episode(*policy, spec.label(), scenario.catalog, demand,
                                   scenario.horizon, seed, options);
  trace.config_fingerprint = scenario.fingerprint;
  return trace;
}

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace) {
  CsvWriter csv(out);
  csv.field("t").field("policy").field("seed").field("num_users").field("reward")
      .field("cost").field("requested_total").field("cache_used")
      .field("num_switched_files");
  csv.end_row();
  for (const PeriodRecord& r : trace.records) {
    csv.field(r.t).field(trace.policy).field(trace.seed).field(r.num_users)
        .field(r.reward).field(r.cost).field(r.requested_total)
        .field(r.cache_used).field(r.num_switched_files);
    csv.end_row();
  }
}

}  // namespace cachebandit
