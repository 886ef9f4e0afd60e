#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cachebandit/catalog.hpp"
#include "cachebandit/schedule.hpp"
#include "cachebandit/spo.hpp"

namespace cachebandit {

/// Per-file sample means and play counts, fed only by observed (cached) files.
struct ArmStats {
  std::vector<double> theta_hat;
  std::vector<std::uint64_t> plays;

  explicit ArmStats(std::size_t num_files = 0)
      : theta_hat(num_files, 0.0), plays(num_files, 0) {}

  /// Running-mean update with one normalized sample r / (U S_f) = d_f.
  void record(FileId f, double sample) {
    const double n = static_cast<double>(plays[f]);
    theta_hat[f] = (theta_hat[f] * n + sample) / (n + 1.0);
    ++plays[f];
  }
};

/// theta_hat + sqrt(3 ln t / (2 T)).
double perturb_cucb(double theta_hat, std::uint64_t plays, std::uint64_t t);

/// theta_hat + F^-rho sqrt(3 ln(mean_users t) / (2 mean_users T)).
double perturb_mcucb(double theta_hat, std::uint64_t plays, std::uint64_t t,
                     std::size_t num_files, double rho, double mean_users);

enum class PolicyKind {
  kCucb,
  kCucbscConstant,
  kCucbscSqrt,
  kMcucbscConstant,
  kMcucbscSqrt,
  kEpsGreedy,
  kDeltaEpsGreedy,
  kDeltaMyopic,
  kIub,
  kFixed,  // caches a fixed set forever (baselines, negative controls)
};

struct PolicyParams {
  std::uint64_t lockup = 10;         // L
  double gamma = 2.0;
  double epsilon = 0.1;
  std::uint64_t delta_refresh = 10;  // Delta for the refresh-based policies
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::kCucb;
  PolicyParams params;
  std::vector<FileId> fixed_files;  // kFixed only

  /// Config/CSV name, e.g. "cucbsc-L" or "delta-myopic".
  std::string name() const;
  /// Name with the parameters that matter for this kind, e.g. "cucbsc-L(L=10)".
  std::string label() const;
};

std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);
bool is_bandit(PolicyKind kind);
bool uses_mcucb_perturbation(PolicyKind kind);
std::vector<PolicyKind> all_policy_kinds();

/// Schedule implied by a bandit policy spec.
SwitchingSchedule make_schedule(const PolicySpec& spec, std::size_t num_files);

/// Cache-placement policy. Periods are presented in order t = 1, 2, ...;
/// `choose_cache` returns the cache used in period t and `observe` delivers
/// that period's demand, of which only cached files are visible.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual const CacheContent& choose_cache(std::uint64_t t, Rng& rng) = 0;
  virtual void observe(const DemandVector& demand, const Catalog& catalog) = 0;

  const CacheContent& current() const { return cache_; }
  virtual const ArmStats* stats() const { return nullptr; }
  virtual const SwitchingSchedule* schedule() const { return nullptr; }

 protected:
  CacheContent cache_;
};

struct PolicyContext {
  const Catalog& catalog;
  const PopularityProfile& profile;  // true profile; only IUB/MCUCBSC read it
  SolverOptions solver;
  double zipf_rho = 0.0;  // skewness assumed by the MCUCBSC perturbation
};

/// Builds a policy in its initial state. Bandit policies reject catalogs
/// holding a file larger than the cache, since it can never be sampled.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec,
                                    const PolicyContext& context);

/// Uniform random permutation of `candidates`, added while they fit and
/// stopping at the first that does not.
CacheContent random_fill(CacheContent base, std::vector<FileId> candidates,
                         const Catalog& catalog, Rng& rng);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cachebandit
