#include "cachebandit/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "cachebandit/csv.hpp"

namespace cachebandit {

double perturb_cucb(double theta_hat, std::uint64_t plays, std::uint64_t t) {
  if (plays == 0) throw std::invalid_argument("perturbation needs plays >= 1");
  if (t == 0) throw std::invalid_argument("periods start at t = 1");
  return theta_hat + std::sqrt(3.0 * std::log(static_cast<double>(t)) /
                               (2.0 * static_cast<double>(plays)));
}

double perturb_mcucb(double theta_hat, std::uint64_t plays, std::uint64_t t,
                     std::size_t num_files, double rho, double mean_users) {
  if (plays == 0) throw std::invalid_argument("perturbation needs plays >= 1");
  if (!(mean_users > 0.0)) {
    throw std::invalid_argument("modified perturbation needs mean_users > 0");
  }
  const double scaled_t = mean_users * static_cast<double>(t);
  if (scaled_t < 1.0) {
    throw std::invalid_argument("modified perturbation needs mean_users * t >= 1");
  }
  const double weight = std::pow(static_cast<double>(num_files), -rho);
  return theta_hat + weight * std::sqrt(3.0 * std::log(scaled_t) /
                                        (2.0 * mean_users *
                                         static_cast<double>(plays)));
}

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 10> kNames{{
    {PolicyKind::kCucb, "cucb"},
    {PolicyKind::kCucbscConstant, "cucbsc-L"},
    {PolicyKind::kCucbscSqrt, "cucbsc-sqrt"},
    {PolicyKind::kMcucbscConstant, "mcucbsc-L"},
    {PolicyKind::kMcucbscSqrt, "mcucbsc-sqrt"},
    {PolicyKind::kEpsGreedy, "eps-greedy"},
    {PolicyKind::kDeltaEpsGreedy, "delta-eps-greedy"},
    {PolicyKind::kDeltaMyopic, "delta-myopic"},
    {PolicyKind::kIub, "iub"},
    {PolicyKind::kFixed, "fixed"},
}};

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::vector<PolicyKind> all_policy_kinds() {
  std::vector<PolicyKind> kinds;
  for (const auto& [k, name] : kNames) {
    if (k != PolicyKind::kFixed) kinds.push_back(k);
  }
  return kinds;
}

bool is_bandit(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kCucb:
    case PolicyKind::kCucbscConstant:
    case PolicyKind::kCucbscSqrt:
    case PolicyKind::kMcucbscConstant:
    case PolicyKind::kMcucbscSqrt:
      return true;
    default:
      return false;
  }
}

bool uses_mcucb_perturbation(PolicyKind kind) {
  return kind == PolicyKind::kMcucbscConstant ||
         kind == PolicyKind::kMcucbscSqrt;
}

std::string PolicySpec::name() const { return std::string(policy_name(kind)); }

std::string PolicySpec::label() const {
  std::ostringstream out;
  out << name();
  switch (kind) {
    case PolicyKind::kCucbscConstant:
    case PolicyKind::kMcucbscConstant:
      out << "(L=" << params.lockup << ")";
      break;
    case PolicyKind::kCucbscSqrt:
    case PolicyKind::kMcucbscSqrt:
      out << "(gamma=" << format_double(params.gamma) << ")";
      break;
    case PolicyKind::kEpsGreedy:
      out << "(epsilon=" << format_double(params.epsilon) << ")";
      break;
    case PolicyKind::kDeltaEpsGreedy:
      out << "(delta_refresh=" << params.delta_refresh
          << ";epsilon=" << format_double(params.epsilon) << ")";
      break;
    case PolicyKind::kDeltaMyopic:
      out << "(delta_refresh=" << params.delta_refresh << ")";
      break;
    case PolicyKind::kFixed: {
      out << "(files=";
      for (std::size_t i = 0; i < fixed_files.size(); ++i) {
        out << (i ? " " : "") << fixed_files[i] + 1;
      }
      out << ")";
      break;
    }
    default:
      break;
  }
  return out.str();
}

SwitchingSchedule make_schedule(const PolicySpec& spec, std::size_t num_files) {
  switch (spec.kind) {
    case PolicyKind::kCucb:
      return SwitchingSchedule::every_period(num_files);
    case PolicyKind::kCucbscConstant:
    case PolicyKind::kMcucbscConstant:
      return SwitchingSchedule::constant(num_files, spec.params.lockup);
    case PolicyKind::kCucbscSqrt:
    case PolicyKind::kMcucbscSqrt:
      return SwitchingSchedule::sqrt_growth(num_files, spec.params.gamma);
    default:
      throw std::invalid_argument("policy '" + spec.name() +
                                  "' has no switching schedule");
  }
}

CacheContent random_fill(CacheContent base, std::vector<FileId> candidates,
                         const Catalog& catalog, Rng& rng) {
  std::shuffle(candidates.begin(), candidates.end(), rng);
  for (FileId f : candidates) {
    if (base.used + catalog.size(f) > catalog.capacity()) break;
    base.files.push_back(f);
    base.used += catalog.size(f);
  }
  std::sort(base.files.begin(), base.files.end());
  return base;
}

namespace {

std::vector<FileId> all_files(std::size_t n) {
  std::vector<FileId> files(n);
  for (std::size_t f = 0; f < n; ++f) files[f] = static_cast<FileId>(f);
  return files;
}

void record_cached(ArmStats& stats, const CacheContent& cache,
                   const DemandVector& demand) {
  for (FileId f : cache.files) stats.record(f, demand.d(f));
}

void check_period(std::uint64_t expected, std::uint64_t t) {
  if (t != expected) {
    throw std::logic_error("policy periods must be presented in order");
  }
}

// CUCB, CUCBSC and MCUCBSC: one file per period for F initialization periods,
// then re-solve on perturbed estimates at switching periods only.
class LockupUcbPolicy final : public Policy {
 public:
  LockupUcbPolicy(const PolicySpec& spec, const PolicyContext& context,
                  double zipf_rho)
      : catalog_(context.catalog),
        solver_(context.solver),
        schedule_(make_schedule(spec, context.catalog.num_files())),
        stats_(context.catalog.num_files()),
        modified_(uses_mcucb_perturbation(spec.kind)),
        rho_(zipf_rho),
        mean_users_(context.profile.mean_users),
        perturbed_(context.catalog.num_files()) {
    if (catalog_.max_file_size() > catalog_.capacity()) {
      throw ConfigError("bandit policy '" + spec.name() +
                        "' needs every file to fit in the cache");
    }
    if (modified_ && !(mean_users_ > 0.0)) {
      throw ConfigError("policy '" + spec.name() + "' needs mean_users > 0");
    }
  }

  const CacheContent& choose_cache(std::uint64_t t, Rng&) override {
    check_period(next_period_, t);
    ++next_period_;
    const std::size_t n = catalog_.num_files();
    if (t <= n) {
      const FileId f = static_cast<FileId>(t - 1);
      cache_.files.assign(1, f);
      cache_.used = catalog_.size(f);
      return cache_;
    }
    if (t == schedule_.current()) {
      for (std::size_t f = 0; f < n; ++f) {
        perturbed_[f] =
            modified_ ? perturb_mcucb(stats_.theta_hat[f], stats_.plays[f], t, n,
                                      rho_, mean_users_)
                      : perturb_cucb(stats_.theta_hat[f], stats_.plays[f], t);
      }
      cache_ = solver_.solve(perturbed_, catalog_);
      schedule_.advance();
    }
    return cache_;
  }

  void observe(const DemandVector& demand, const Catalog&) override {
    record_cached(stats_, cache_, demand);
  }

  const ArmStats* stats() const override { return &stats_; }
  const SwitchingSchedule* schedule() const override { return &schedule_; }

 private:
  const Catalog& catalog_;
  SolverOptions solver_;
  SwitchingSchedule schedule_;
  ArmStats stats_;
  bool modified_;
  double rho_;
  double mean_users_;
  std::vector<double> perturbed_;
  std::uint64_t next_period_ = 1;
};

// epsilon-greedy (refresh = 1) and (Delta, epsilon)-greedy.
class EpsilonGreedyPolicy final : public Policy {
 public:
  EpsilonGreedyPolicy(const PolicyContext& context, double epsilon,
                      std::uint64_t refresh)
      : catalog_(context.catalog),
        solver_(context.solver),
        stats_(context.catalog.num_files()),
        epsilon_(epsilon),
        refresh_(refresh) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
      throw ConfigError("epsilon must lie in [0, 1]");
    }
    if (refresh == 0) throw ConfigError("delta_refresh must be >= 1");
  }

  const CacheContent& choose_cache(std::uint64_t t, Rng& rng) override {
    check_period(next_period_, t);
    ++next_period_;
    if (t == 1) {
      cache_ = random_fill({}, all_files(catalog_.num_files()), catalog_, rng);
    } else if ((t - 1) % refresh_ == 0) {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      if (unit(rng) < epsilon_) {
        cache_ = random_fill({}, all_files(catalog_.num_files()), catalog_, rng);
      } else {
        cache_ = solver_.solve(stats_.theta_hat, catalog_);
      }
    }
    return cache_;
  }

  void observe(const DemandVector& demand, const Catalog&) override {
    record_cached(stats_, cache_, demand);
  }

  const ArmStats* stats() const override { return &stats_; }

 private:
  const Catalog& catalog_;
  SolverOptions solver_;
  ArmStats stats_;
  double epsilon_;
  std::uint64_t refresh_;
  std::uint64_t next_period_ = 1;
};

// Keeps files requested since the last refresh, refills the rest at random.
class DeltaMyopicPolicy final : public Policy {
 public:
  DeltaMyopicPolicy(const PolicyContext& context, std::uint64_t refresh)
      : catalog_(context.catalog),
        hit_(context.catalog.num_files(), 0),
        refresh_(refresh) {
    if (refresh == 0) throw ConfigError("delta_refresh must be >= 1");
  }

  const CacheContent& choose_cache(std::uint64_t t, Rng& rng) override {
    check_period(next_period_, t);
    ++next_period_;
    if (t == 1) {
      cache_ = random_fill({}, all_files(catalog_.num_files()), catalog_, rng);
    } else if ((t - 1) % refresh_ == 0) {
      CacheContent kept;
      for (FileId f : cache_.files) {
        if (hit_[f]) {
          kept.files.push_back(f);
          kept.used += catalog_.size(f);
        }
      }
      std::vector<FileId> candidates;
      candidates.reserve(catalog_.num_files());
      for (std::size_t f = 0; f < catalog_.num_files(); ++f) {
        if (!cache_.contains(static_cast<FileId>(f))) {
          candidates.push_back(static_cast<FileId>(f));
        }
      }
      cache_ = random_fill(std::move(kept), std::move(candidates), catalog_, rng);
      std::fill(hit_.begin(), hit_.end(), 0);
    }
    return cache_;
  }

  void observe(const DemandVector& demand, const Catalog&) override {
    for (FileId f : cache_.files) {
      if (demand.requests(f) > 0) hit_[f] = 1;
    }
  }

 private:
  const Catalog& catalog_;
  std::vector<char> hit_;
  std::uint64_t refresh_;
  std::uint64_t next_period_ = 1;
};

// Informed upper bound and fixed-set baselines: one decision at t = 1.
class StaticPolicy final : public Policy {
 public:
  explicit StaticPolicy(CacheContent cache) : chosen_(std::move(cache)) {}

  const CacheContent& choose_cache(std::uint64_t t, Rng&) override {
    if (t == 1) cache_ = chosen_;
    return cache_;
  }
  void observe(const DemandVector&, const Catalog&) override {}

 private:
  CacheContent chosen_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec,
                                    const PolicyContext& context) {
  switch (spec.kind) {
    case PolicyKind::kCucb:
    case PolicyKind::kCucbscConstant:
    case PolicyKind::kCucbscSqrt:
    case PolicyKind::kMcucbscConstant:
    case PolicyKind::kMcucbscSqrt:
      return std::make_unique<LockupUcbPolicy>(spec, context, context.zipf_rho);
    case PolicyKind::kEpsGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(context, spec.params.epsilon, 1);
    case PolicyKind::kDeltaEpsGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(context, spec.params.epsilon,
                                                   spec.params.delta_refresh);
    case PolicyKind::kDeltaMyopic:
      return std::make_unique<DeltaMyopicPolicy>(context,
                                                 spec.params.delta_refresh);
    case PolicyKind::kIub:
      return std::make_unique<StaticPolicy>(
          context.solver.solve(context.profile.theta, context.catalog));
    case PolicyKind::kFixed:
      return std::make_unique<StaticPolicy>(
          make_cache(spec.fixed_files, context.catalog));
  }
  throw std::invalid_argument("unhandled policy kind");
}

}  // namespace cachebandit
