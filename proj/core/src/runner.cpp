#include "cachebandit/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cachebandit/csv.hpp"

namespace cachebandit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void RunningStat::add(double x) {
  if (std::isnan(x)) return;
  ++n;
  const double delta = x - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (x - mean);
}

void RunningStat::merge(const RunningStat& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(o.n);
  const double total = na + nb;
  const double delta = o.mean - mean;
  mean += delta * nb / total;
  m2 += o.m2 + delta * delta * na * nb / total;
  n += o.n;
}

double RunningStat::se() const {
  if (n < 2) return kNaN;
  const double var = m2 / static_cast<double>(n - 1);
  return std::sqrt(std::max(0.0, var) / static_cast<double>(n));
}

double RunningStat::value() const { return n == 0 ? kNaN : mean; }

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t horizon, bool full) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    if (full || t <= 1000 || t % 10 == 0 || t == horizon) out.push_back(t);
  }
  return out;
}

std::uint64_t episode_seed(std::uint64_t seed_base, std::size_t point,
                           std::uint64_t replicate) {
  return seed_base ^ mix64(mix64(static_cast<std::uint64_t>(point)) + replicate);
}

std::size_t num_sweep_points(const ExperimentConfig& config) {
  return config.sweep == SweepAxis::kNone ? 1 : config.sweep_values.size();
}

Scenario build_scenario(const ExperimentConfig& config, std::size_t point) {
  if (point >= num_sweep_points(config)) {
    throw std::out_of_range("sweep point out of range");
  }
  std::vector<std::uint32_t> sizes = base_sizes(config);
  std::uint64_t total = 0;
  for (std::uint32_t s : sizes) total += s;
  std::uint64_t capacity = config.capacity.resolve(total);
  std::uint32_t users = config.max_users;
  double rho = config.zipf_rho;

  if (config.sweep != SweepAxis::kNone) {
    const std::string& token = config.sweep_values[point];
    switch (config.sweep) {
      case SweepAxis::kRho:
        rho = parse_real(token);
        break;
      case SweepAxis::kCapacity:
        capacity = parse_capacity(token).resolve(total);
        break;
      case SweepAxis::kMeanUsers:
        users = static_cast<std::uint32_t>(std::llround(2.0 * parse_real(token)));
        break;
      case SweepAxis::kNumFiles: {
        if (!config.sizes.empty()) {
          throw ConfigError("the num_files sweep needs size_classes, not sizes");
        }
        const double relative =
            static_cast<double>(capacity) / static_cast<double>(total);
        sizes = layout_sizes(parse_count(token), config.size_classes,
                             config.size_layout);
        std::uint64_t new_total = 0;
        for (std::uint32_t s : sizes) new_total += s;
        capacity = static_cast<std::uint64_t>(std::max<long long>(
            1, std::llround(relative * static_cast<double>(new_total))));
        break;
      }
      case SweepAxis::kNone:
        break;
    }
  }

  Catalog catalog(std::move(sizes), capacity, users);
  PopularityProfile profile =
      build_zipf_profile(catalog.num_files(), rho, users / 2.0, users);
  return Scenario{std::move(catalog), std::move(profile), rho, config.solver,
                  config.horizon, config_fingerprint(config)};
}

ReferenceInfo regret_reference(const Scenario& s) {
  ReferenceInfo info;
  const auto& theta = s.profile.theta;
  const double solver_reward =
      expected_reward(s.solver.solve(theta, s.catalog), theta, s.catalog);
  if (exact_feasible(s.catalog, s.solver.exact_table_limit)) {
    const double r_opt = expected_reward(
        solve_exact(theta, s.catalog, s.solver.exact_table_limit), theta,
        s.catalog);
    info.reference.r_opt = r_opt;
    info.reference.alpha =
        s.solver.kind == SolverKind::kExact || r_opt == 0.0 ? 1.0
                                                            : solver_reward / r_opt;
    info.exact = true;
  } else {
    info.reference.r_opt = solver_reward;
    info.reference.alpha = 1.0;
    info.exact = false;
  }
  info.reference.beta = 1.0;
  return info;
}

double PolicyBound::evaluate(double t) const {
  switch (form) {
    case Form::kTheorem1:
      return theorem1_bound(*constants, Theorem1Params{w, gamma, beta}, t);
    case Form::kTheorem2:
      return theorem2_bound(*constants, Theorem2Params{w, lockup}, t);
    case Form::kNone:
      break;
  }
  return kNaN;
}

PolicyBound policy_bound(const Scenario& scenario, const PolicySpec& spec,
                         const ReferenceInfo& reference, double w) {
  PolicyBound bound;
  bound.w = w;
  bound.beta = reference.reference.beta;
  if (!is_bandit(spec.kind) || uses_mcucb_perturbation(spec.kind)) {
    bound.note = "no closed-form bound for this policy";
    return bound;
  }
  const std::size_t f = scenario.catalog.num_files();
  const SwitchingSchedule schedule = make_schedule(spec, f);
  try {
    bound.constants = compute_bound_constants(
        scenario.catalog, scenario.profile, reference.reference.alpha, schedule);
  } catch (const EnumerationBudgetExceeded& e) {
    bound.note = std::string("bounds disabled: ") + e.what();
    return bound;
  } catch (const DegenerateInstance& e) {
    bound.note = std::string("bounds disabled: ") + e.what();
    return bound;
  }
  if (schedule.kind() == SwitchingSchedule::Kind::kSqrt) {
    bound.gamma = spec.params.gamma;
    if (!sqrt_gamma_admissible(f, bound.gamma)) {
      bound.note = "gamma outside the admissible range of the sqrt bound";
    } else if (bound.constants->m_u == bound.constants->m_l) {
      bound.note = "sqrt bound undefined: M_u == M_l";
    } else {
      bound.form = PolicyBound::Form::kTheorem1;
    }
    return bound;
  }
  if (scenario.solver.kind != SolverKind::kExact) {
    bound.note = "constant-schedule bound needs the exact solver";
    return bound;
  }
  bound.lockup = schedule.constant_gap();
  bound.form = PolicyBound::Form::kTheorem2;
  return bound;
}

RunningStat CellResult::efficiency() const {
  RunningStat s;
  for (double e : final_efficiency) s.add(e);
  return s;
}

const CellResult& ExperimentResult::cell(std::size_t point,
                                         std::size_t policy) const {
  return cells.at(point * config.policies.size() + policy);
}

namespace {

struct ChunkResult {
  std::vector<CheckpointStats> checkpoints;
  std::vector<double> efficiency, sampling, switching, total;
};

ChunkResult run_chunk(const Scenario& scenario, const PolicySpec& spec,
                      const RegretReference& reference, double w,
                      const std::vector<std::uint64_t>& checkpoints,
                      std::uint64_t seed_base, std::size_t point,
                      std::uint64_t first, std::uint64_t last) {
  ChunkResult out;
  out.checkpoints.resize(checkpoints.size());
  for (std::uint64_t r = first; r < last; ++r) {
    const EpisodeTrace trace =
        run_episode(scenario, spec, episode_seed(seed_base, point, r));
    const RegretLedger ledger =
        compute_regret(trace, reference, scenario.profile, scenario.catalog, w);
    double reward = 0.0;
    double cost = 0.0;
    double requested = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < trace.size() && k < checkpoints.size(); ++i) {
      const PeriodRecord& rec = trace.records[i];
      reward += rec.reward;
      cost += rec.cost;
      requested += rec.requested_total;
      if (rec.t != checkpoints[k]) continue;
      CheckpointStats& cp = out.checkpoints[k++];
      cp.sampling.add(ledger.sampling_regret[i]);
      cp.switching.add(ledger.switching_regret[i]);
      cp.total.add(ledger.total_regret[i]);
      cp.efficiency.add(requested > 0.0 ? (reward - w * cost) / requested : kNaN);
    }
    double efficiency = kNaN;
    try {
      efficiency = cache_efficiency(trace, w);
    } catch (const UndefinedEfficiency&) {
    }
    out.efficiency.push_back(efficiency);
    out.sampling.push_back(ledger.sampling_regret.back());
    out.switching.push_back(ledger.switching_regret.back());
    out.total.push_back(ledger.total_regret.back());
  }
  return out;
}

void fold(CellResult& cell, ChunkResult&& chunk) {
  for (std::size_t k = 0; k < cell.checkpoints.size(); ++k) {
    cell.checkpoints[k].sampling.merge(chunk.checkpoints[k].sampling);
    cell.checkpoints[k].switching.merge(chunk.checkpoints[k].switching);
    cell.checkpoints[k].total.merge(chunk.checkpoints[k].total);
    cell.checkpoints[k].efficiency.merge(chunk.checkpoints[k].efficiency);
  }
  const auto append = [](std::vector<double>& to, const std::vector<double>& from) {
    to.insert(to.end(), from.begin(), from.end());
  };
  append(cell.final_efficiency, chunk.efficiency);
  append(cell.final_sampling, chunk.sampling);
  append(cell.final_switching, chunk.switching);
  append(cell.final_total, chunk.total);
}

void add_warning(ExperimentResult& result, std::string message,
                 std::ostream* log) {
  if (std::find(result.warnings.begin(), result.warnings.end(), message) !=
      result.warnings.end()) {
    return;
  }
  if (log) *log << "warning: " << message << "\n";
  result.warnings.push_back(std::move(message));
}

}  // namespace

ExperimentResult simulate_experiment(const ExperimentConfig& config,
                                     const RunOptions& options) {
  validate_config(config);
  if (options.chunk_size == 0) throw std::invalid_argument("chunk_size must be >= 1");
  ExperimentResult result;
  result.config = config;
  result.fingerprint = config_fingerprint(config);
  result.config_text = format_config(config, false);
  result.checkpoints = checkpoint_grid(config.horizon, config.full_resolution);

  const std::size_t num_points = num_sweep_points(config);
  const std::size_t num_policies = config.policies.size();
  std::vector<Scenario> scenarios;
  scenarios.reserve(num_points);
  for (std::size_t p = 0; p < num_points; ++p) {
    Scenario scenario = build_scenario(config, p);
    PointInfo info;
    info.sweep_value = config.sweep == SweepAxis::kNone ? "" : config.sweep_values[p];
    info.num_files = scenario.catalog.num_files();
    info.capacity = scenario.catalog.capacity();
    info.total_size = scenario.catalog.total_size();
    info.max_users = scenario.catalog.max_users();
    info.mean_users = scenario.profile.mean_users;
    info.zipf_rho = scenario.zipf_rho;
    info.reference = regret_reference(scenario);
    if (!info.reference.exact) {
      add_warning(result,
                  "exact solver exceeds its table budget; regret is measured "
                  "against the solver's own reward (alpha = 1)",
                  options.log);
    }
    for (const PolicySpec& spec : config.policies) {
      const std::string where = info.sweep_value.empty()
                                    ? spec.label()
                                    : spec.label() + " at " +
                                          std::string(sweep_axis_name(config.sweep)) +
                                          " = " + info.sweep_value;
      PolicyContext context{scenario.catalog, scenario.profile, scenario.solver,
                            scenario.zipf_rho};
      try {
        make_policy(spec, context);
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      if (spec.kind == PolicyKind::kFixed) {
        for (FileId f : spec.fixed_files) {
          if (f >= info.num_files) throw ConfigError(where + ": unknown file");
        }
      }
      if (spec.kind == PolicyKind::kCucbscSqrt ||
          spec.kind == PolicyKind::kMcucbscSqrt) {
        const double lower = sqrt_gamma_lower(info.num_files);
        if (spec.params.gamma < lower) {
          add_warning(result,
                      where + ": gamma " + format_double(spec.params.gamma) +
                          " is below 2 + 1/sqrt(F+1) = " + format_double(lower) +
                          "; the sqrt-schedule regret guarantee does not apply",
                      options.log);
        }
      }
      info.bounds.push_back(
          policy_bound(scenario, spec, info.reference, config.w));
    }
    result.points.push_back(std::move(info));
    scenarios.push_back(std::move(scenario));
  }

  result.cells.resize(num_points * num_policies);
  for (std::size_t p = 0; p < num_points; ++p) {
    for (std::size_t q = 0; q < num_policies; ++q) {
      CellResult& cell = result.cells[p * num_policies + q];
      cell.point = p;
      cell.policy = q;
      cell.label = config.policies[q].label();
      cell.checkpoints.resize(result.checkpoints.size());
      cell.bound.reserve(result.checkpoints.size());
      const PolicyBound& bound = result.points[p].bounds[q];
      for (std::uint64_t t : result.checkpoints) {
        cell.bound.push_back(bound.evaluate(static_cast<double>(t)));
      }
    }
  }

  struct Task {
    std::size_t cell;
    std::size_t chunk;
    std::uint64_t first;
    std::uint64_t last;
  };
  std::vector<Task> tasks;
  const std::uint64_t chunk = options.chunk_size;
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    for (std::uint64_t r = 0, k = 0; r < config.replicates; r += chunk, ++k) {
      tasks.push_back({c, k, r, std::min(config.replicates, r + chunk)});
    }
  }

  struct CellState {
    std::size_t next = 0;
    std::map<std::size_t, ChunkResult> pending;
  };
  std::vector<CellState> states(result.cells.size());
  std::mutex mutex;
  std::atomic<std::size_t> next_task{0};
  std::size_t done = 0;
  std::exception_ptr failure;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      const Task& task = tasks[i];
      const CellResult& cell = result.cells[task.cell];
      try {
        ChunkResult chunk_result = run_chunk(
            scenarios[cell.point], config.policies[cell.policy],
            result.points[cell.point].reference.reference, config.w,
            result.checkpoints, config.seed, cell.point, task.first, task.last);
        std::lock_guard lock(mutex);
        CellState& state = states[task.cell];
        state.pending.emplace(task.chunk, std::move(chunk_result));
        for (auto it = state.pending.find(state.next); it != state.pending.end();
             it = state.pending.find(state.next)) {
          fold(result.cells[task.cell], std::move(it->second));
          state.pending.erase(it);
          ++state.next;
        }
        ++done;
        if (options.log && (done % 50 == 0 || done == tasks.size())) {
          *options.log << "progress: " << done << "/" << tasks.size()
                       << " work items\n";
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_metrics_csv(std::ostream& out, const ExperimentResult& result) {
  CsvWriter csv(out);
  for (const char* h :
       {"t", "policy", "sweep_value", "mean_sampling_regret", "se_sampling_regret",
        "mean_switching_regret", "se_switching_regret", "mean_total_regret",
        "se_total_regret", "theorem_bound", "efficiency", "config_fingerprint"}) {
    csv.field(h);
  }
  csv.end_row();
  for (const CellResult& cell : result.cells) {
    const std::string& value = result.points[cell.point].sweep_value;
    for (std::size_t k = 0; k < result.checkpoints.size(); ++k) {
      const CheckpointStats& cp = cell.checkpoints[k];
      csv.field(result.checkpoints[k]).field(cell.label).field(value)
          .field(cp.sampling.value()).field(cp.sampling.se())
          .field(cp.switching.value()).field(cp.switching.se())
          .field(cp.total.value()).field(cp.total.se())
          .field(cell.bound[k]).field(cp.efficiency.value())
          .field(result.fingerprint);
      csv.end_row();
    }
  }
}

void write_sweep_csv(std::ostream& out, const ExperimentResult& result) {
  CsvWriter csv(out);
  for (const char* h :
       {"sweep_axis", "sweep_value", "policy", "replicates", "mean_efficiency",
        "se_efficiency", "mean_sampling_regret", "mean_switching_regret",
        "mean_total_regret", "config_fingerprint"}) {
    csv.field(h);
  }
  csv.end_row();
  const std::string axis(sweep_axis_name(result.config.sweep));
  for (const CellResult& cell : result.cells) {
    const RunningStat eff = cell.efficiency();
    RunningStat sampling, switching, total;
    for (double v : cell.final_sampling) sampling.add(v);
    for (double v : cell.final_switching) switching.add(v);
    for (double v : cell.final_total) total.add(v);
    csv.field(axis).field(result.points[cell.point].sweep_value).field(cell.label)
        .field(static_cast<std::uint64_t>(cell.final_total.size()))
        .field(eff.value()).field(eff.se())
        .field(sampling.value()).field(switching.value()).field(total.value())
        .field(result.fingerprint);
    csv.end_row();
  }
}

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::ordered_json constants_json(const BoundConstants& k) {
  nlohmann::ordered_json j;
  j["r_opt"] = number(k.r_opt);
  j["alpha"] = number(k.alpha);
  j["Delta_u"] = number(k.delta_u);
  j["Delta_l"] = number(k.delta_l);
  j["M_u"] = number(k.m_u);
  j["M_l"] = number(k.m_l);
  j["M"] = number(k.capacity);
  j["K_1"] = number(k.k1);
  j["K_1_partial_sum"] = number(k.k1_check.partial);
  j["K_1_tail_bound"] = number(k.k1_check.tail_bound);
  j["K_1_partial_terms"] = k.k1_check.terms;
  j["g_inv_slope"] = number(k.g_inv_slope);
  j["C"] = number(k.c);
  return j;
}

}  // namespace

std::string metadata_json(const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["config_fingerprint"] = result.fingerprint;
  j["config"] = result.config_text;
  j["seed"] = result.config.seed;
  j["replicates"] = result.config.replicates;
  j["horizon"] = result.config.horizon;
  j["w"] = result.config.w;
  j["sweep_axis"] = std::string(sweep_axis_name(result.config.sweep));
  j["checkpoints"] = result.config.full_resolution
                         ? "every period"
                         : "every period up to t = 1000, then every 10th";
  j["decisions"] = {
      {"aggregate", "mean over replicates with standard-error columns"},
      {"regret_reward",
       "expected reward of the realized cache under the true popularity"},
      {"efficiency_column",
       "mean over replicates of cumulative efficiency up to t; replicates "
       "with no requested data yet are skipped"},
      {"seeds",
       "episode seed depends on (seed, sweep point, replicate) only; policies "
       "share demand draws"},
      {"mean_users", "mean users per period is U/2 (users uniform on 0..U)"},
      {"random_cache",
       "random caches (epsilon-greedy exploration, delta-myopic fill) add files "
       "in uniformly random order until the first one that does not fit"},
      {"mcucbsc_mean_users", "MCUCBSC uses the true mean user count"},
      {"greedy_solver",
       std::string("files by decreasing estimate, ties to the lower index; ") +
           (result.config.solver.greedy_mode == GreedyMode::kStopAtBlocker
                ? "stops at the first file that does not fit"
                : "skips files that do not fit")},
  };
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    const PointInfo& info = result.points[p];
    nlohmann::ordered_json pj;
    pj["sweep_value"] = info.sweep_value;
    pj["num_files"] = info.num_files;
    pj["capacity"] = info.capacity;
    pj["total_size"] = info.total_size;
    pj["relative_capacity"] =
        number(static_cast<double>(info.capacity) / static_cast<double>(info.total_size));
    pj["max_users"] = info.max_users;
    pj["mean_users"] = number(info.mean_users);
    pj["zipf_rho"] = number(info.zipf_rho);
    pj["r_opt"] = number(info.reference.reference.r_opt);
    pj["alpha"] = number(info.reference.reference.alpha);
    pj["beta"] = number(info.reference.reference.beta);
    pj["r_opt_exact"] = info.reference.exact;
    nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
    for (std::size_t q = 0; q < info.bounds.size(); ++q) {
      const PolicyBound& b = info.bounds[q];
      nlohmann::ordered_json bj;
      bj["policy"] = result.config.policies[q].label();
      switch (b.form) {
        case PolicyBound::Form::kTheorem1:
          bj["bound"] = "sqrt schedule";
          break;
        case PolicyBound::Form::kTheorem2:
          bj["bound"] = "constant schedule";
          break;
        case PolicyBound::Form::kNone:
          bj["bound"] = nullptr;
          break;
      }
      if (b.constants) bj["constants"] = constants_json(*b.constants);
      if (!b.note.empty()) bj["note"] = b.note;
      bounds.push_back(std::move(bj));
    }
    pj["bounds"] = std::move(bounds);
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

void write_experiment(const ExperimentResult& result,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    std::ofstream out = open("metrics.csv");
    write_metrics_csv(out, result);
  }
  {
    std::ofstream out = open("sweep.csv");
    write_sweep_csv(out, result);
  }
  {
    std::ofstream out = open("metadata.json");
    out << metadata_json(result);
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const RunOptions& options) {
  ExperimentResult result = simulate_experiment(config, options);
  write_experiment(result, out_dir);
  return result;
}

void write_bounds_table(std::ostream& out, const ExperimentConfig& config,
                        std::uint64_t t_max) {
  if (t_max == 0) throw std::invalid_argument("t_max must be >= 1");
  const Scenario scenario = build_scenario(config, 0);
  const ReferenceInfo reference = regret_reference(scenario);
  std::vector<std::uint64_t> grid;
  for (std::uint64_t t = 1; t <= std::min<std::uint64_t>(100, t_max); ++t) {
    grid.push_back(t);
  }
  for (int k = 1; grid.back() < t_max; ++k) {
    const auto t = static_cast<std::uint64_t>(std::llround(100.0 * std::pow(10.0, k / 20.0)));
    grid.push_back(std::min(t, t_max));
  }
  CsvWriter csv(out);
  csv.field("t").field("policy").field("theorem_bound").field("bad_period_rhs");
  csv.end_row();
  for (const PolicySpec& spec : config.policies) {
    const PolicyBound bound = policy_bound(scenario, spec, reference, config.w);
    if (!bound.constants) continue;
    for (std::uint64_t t : grid) {
      csv.field(t).field(spec.label())
          .field(bound.evaluate(static_cast<double>(t)))
          .field(bad_period_rhs(*bound.constants, bound.beta, t));
      csv.end_row();
    }
  }
}

}  // namespace cachebandit
