#include "cachebandit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cachebandit/csv.hpp"

namespace cachebandit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Splits on `sep` outside parentheses; empty items are dropped.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size()) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (s[i] != sep || depth != 0) continue;
    }
    const auto item = trim(s.substr(start, i - start));
    if (!item.empty()) out.push_back(item);
    start = i + 1;
  }
  return out;
}

std::uint64_t to_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint32_t to_u32(std::string_view s) {
  const std::uint64_t v = to_u64(s);
  if (v > 0xffffffffULL) throw ConfigError("value out of range: " + std::string(s));
  return static_cast<std::uint32_t>(v);
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError("expected true or false, got '" + std::string(s) + "'");
}

CapacitySpec to_capacity(std::string_view s) {
  s = trim(s);
  CapacitySpec spec;
  if (!s.empty() && s.back() == '%') {
    spec.relative = true;
    spec.value = to_double(s.substr(0, s.size() - 1));
  } else {
    spec.value = static_cast<double>(to_u64(s));
  }
  if (!(spec.value > 0.0)) throw ConfigError("capacity must be positive");
  if (spec.relative && spec.value > 100.0) {
    throw ConfigError("relative capacity above 100%");
  }
  return spec;
}

std::string format_capacity(const CapacitySpec& c) {
  return c.relative ? format_double(c.value) + "%"
                    : std::to_string(static_cast<std::uint64_t>(c.value));
}

const std::map<std::string_view, SizeLayout>& layout_names() {
  static const std::map<std::string_view, SizeLayout> names{
      {"descending", SizeLayout::kRoundRobinDescending},
      {"ascending", SizeLayout::kRoundRobinAscending},
      {"blocked", SizeLayout::kBlocked},
  };
  return names;
}

const std::map<std::string_view, SweepAxis>& sweep_names() {
  static const std::map<std::string_view, SweepAxis> names{
      {"none", SweepAxis::kNone},          {"rho", SweepAxis::kRho},
      {"capacity", SweepAxis::kCapacity},  {"mean_users", SweepAxis::kMeanUsers},
      {"num_files", SweepAxis::kNumFiles},
  };
  return names;
}

template <typename Enum>
Enum lookup(const std::map<std::string_view, Enum>& names, std::string_view s) {
  const auto it = names.find(trim(s));
  if (it == names.end()) {
    std::string options;
    for (const auto& [name, value] : names) {
      options += (options.empty() ? "" : ", ") + std::string(name);
    }
    throw ConfigError("unknown value '" + std::string(trim(s)) + "' (expected " +
                      options + ")");
  }
  return it->second;
}

template <typename Enum>
std::string_view reverse(const std::map<std::string_view, Enum>& names, Enum e) {
  for (const auto& [name, value] : names) {
    if (value == e) return name;
  }
  return "?";
}

std::string_view layout_name(SizeLayout layout) {
  return reverse(layout_names(), layout);
}

void check_sweep_value(SweepAxis axis, std::string_view value) {
  switch (axis) {
    case SweepAxis::kNone:
      throw ConfigError("sweep_values given but sweep = none");
    case SweepAxis::kRho:
      if (to_double(value) < 0.0) throw ConfigError("rho must be >= 0");
      return;
    case SweepAxis::kCapacity:
      to_capacity(value);
      return;
    case SweepAxis::kMeanUsers: {
      const double u = to_double(value);
      if (!(u > 0.0) || std::llround(2.0 * u) < 1) {
        throw ConfigError("mean_users must be positive");
      }
      return;
    }
    case SweepAxis::kNumFiles:
      if (to_u64(value) == 0) throw ConfigError("num_files must be >= 1");
      return;
  }
}

void apply_policy_param(PolicySpec& spec, std::string_view key,
                        std::string_view value) {
  if (key == "L") {
    spec.params.lockup = to_u64(value);
  } else if (key == "gamma") {
    spec.params.gamma = to_double(value);
  } else if (key == "epsilon") {
    spec.params.epsilon = to_double(value);
  } else if (key == "delta_refresh" || key == "delta") {
    spec.params.delta_refresh = to_u64(value);
  } else if (key == "files") {
    std::istringstream in{std::string(value)};
    std::string token;
    spec.fixed_files.clear();
    while (in >> token) {
      const std::uint64_t f = to_u64(token);
      if (f == 0) throw ConfigError("fixed files are numbered from 1");
      spec.fixed_files.push_back(static_cast<FileId>(f - 1));
    }
  } else {
    throw ConfigError("unknown policy parameter '" + std::string(key) + "'");
  }
}

}  // namespace

std::uint64_t CapacitySpec::resolve(std::uint64_t total_size) const {
  if (!relative) return static_cast<std::uint64_t>(value);
  const auto m = std::llround(value / 100.0 * static_cast<double>(total_size));
  return static_cast<std::uint64_t>(std::max<long long>(1, m));
}

double parse_real(std::string_view text) { return to_double(text); }
std::uint64_t parse_count(std::string_view text) { return to_u64(text); }
CapacitySpec parse_capacity(std::string_view text) { return to_capacity(text); }

std::string_view sweep_axis_name(SweepAxis axis) {
  return reverse(sweep_names(), axis);
}

std::vector<PolicySpec> parse_policy_list(std::string_view text,
                                          const PolicyParams& defaults) {
  std::vector<PolicySpec> out;
  for (std::string_view item : split_top(text, ',')) {
    PolicySpec spec;
    spec.params = defaults;
    const auto open = item.find('(');
    spec.kind = parse_policy_kind(trim(item.substr(0, open)));
    if (open != std::string_view::npos) {
      if (item.back() != ')') {
        throw ConfigError("unbalanced parentheses in '" + std::string(item) + "'");
      }
      const auto inner = item.substr(open + 1, item.size() - open - 2);
      for (std::string_view group : split_top(inner, ';')) {
        for (std::string_view kv : split_top(group, ',')) {
          const auto eq = kv.find('=');
          if (eq == std::string_view::npos) {
            throw ConfigError("expected key=value in '" + std::string(kv) + "'");
          }
          apply_policy_param(spec, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
        }
      }
    }
    out.push_back(std::move(spec));
  }
  if (out.empty()) throw ConfigError("empty policy list");
  return out;
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string policies_text;
  std::size_t policies_line = 0;
  std::size_t sweep_values_line = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where =
        std::string(origin) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    try {
      if (key == "num_files") {
        c.num_files = to_u64(value);
      } else if (key == "size_classes") {
        c.size_classes.clear();
        for (std::string_view item : split_top(value, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string_view::npos) {
            throw ConfigError("expected size:count, got '" + std::string(item) + "'");
          }
          c.size_classes.push_back(
              {to_u32(item.substr(0, colon)), to_u32(item.substr(colon + 1))});
        }
      } else if (key == "sizes") {
        c.sizes.clear();
        for (std::string_view item : split_top(value, ',')) {
          c.sizes.push_back(to_u32(item));
        }
      } else if (key == "size_layout") {
        c.size_layout = lookup(layout_names(), value);
      } else if (key == "capacity") {
        c.capacity = to_capacity(value);
      } else if (key == "max_users") {
        c.max_users = to_u32(value);
      } else if (key == "zipf_rho") {
        c.zipf_rho = to_double(value);
      } else if (key == "horizon") {
        c.horizon = to_u64(value);
      } else if (key == "replicates") {
        c.replicates = to_u64(value);
      } else if (key == "w") {
        c.w = to_double(value);
      } else if (key == "policies") {
        policies_text = value;
        policies_line = line_no;
      } else if (key == "L") {
        c.policy_defaults.lockup = to_u64(value);
      } else if (key == "gamma") {
        c.policy_defaults.gamma = to_double(value);
      } else if (key == "epsilon") {
        c.policy_defaults.epsilon = to_double(value);
      } else if (key == "delta_refresh") {
        c.policy_defaults.delta_refresh = to_u64(value);
      } else if (key == "solver") {
        if (value == "greedy") {
          c.solver.kind = SolverKind::kGreedy;
        } else if (value == "exact") {
          c.solver.kind = SolverKind::kExact;
        } else {
          throw ConfigError("solver must be greedy or exact");
        }
      } else if (key == "greedy_mode") {
        if (value == "stop") {
          c.solver.greedy_mode = GreedyMode::kStopAtBlocker;
        } else if (value == "skip") {
          c.solver.greedy_mode = GreedyMode::kSkipBlocker;
        } else {
          throw ConfigError("greedy_mode must be stop or skip");
        }
      } else if (key == "exact_table_limit") {
        c.solver.exact_table_limit = to_u64(value);
      } else if (key == "sweep") {
        c.sweep = lookup(sweep_names(), value);
      } else if (key == "sweep_values") {
        c.sweep_values.clear();
        for (std::string_view item : split_top(value, ',')) {
          c.sweep_values.emplace_back(item);
        }
        sweep_values_line = line_no;
      } else if (key == "seed") {
        c.seed = to_u64(value);
      } else if (key == "full_resolution") {
        c.full_resolution = to_bool(value);
      } else if (key == "threads") {
        c.threads = to_u32(value);
      } else {
        throw ConfigError("unknown key");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": key '" + key + "': " + e.what());
    }
  }

  const auto at = [&](std::size_t line) {
    return std::string(origin) + ":" + std::to_string(line);
  };
  try {
    c.policies = policies_text.empty()
                     ? std::vector<PolicySpec>{}
                     : parse_policy_list(policies_text, c.policy_defaults);
  } catch (const ConfigError& e) {
    throw ConfigError(at(policies_line) + ": key 'policies': " + e.what());
  }
  if (policies_text.empty()) {
    for (PolicyKind kind : all_policy_kinds()) {
      PolicySpec spec;
      spec.kind = kind;
      spec.params = c.policy_defaults;
      c.policies.push_back(spec);
    }
  }
  for (const std::string& v : c.sweep_values) {
    try {
      check_sweep_value(c.sweep, v);
    } catch (const ConfigError& e) {
      throw ConfigError(at(sweep_values_line) + ": key 'sweep_values': " + e.what());
    }
  }
  try {
    validate_config(c);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::vector<std::uint32_t> base_sizes(const ExperimentConfig& c) {
  if (!c.sizes.empty()) return c.sizes;
  if (c.num_files != 0) return layout_sizes(c.num_files, c.size_classes, c.size_layout);
  return layout_sizes(c.size_classes, c.size_layout);
}

void validate_config(const ExperimentConfig& c) {
  if (c.sizes.empty() && c.size_classes.empty()) {
    throw ConfigError("either sizes or size_classes is required");
  }
  for (const SizeClass& sc : c.size_classes) {
    if (sc.size == 0 || sc.count == 0) {
      throw ConfigError("size classes need size >= 1 and count >= 1");
    }
  }
  if (!c.sizes.empty() && c.num_files != 0 && c.num_files != c.sizes.size()) {
    throw ConfigError("num_files disagrees with the number of explicit sizes");
  }
  if (!(c.capacity.value > 0.0)) throw ConfigError("capacity is required");
  if (c.max_users == 0) throw ConfigError("max_users must be >= 1");
  if (c.zipf_rho < 0.0) throw ConfigError("zipf_rho must be >= 0");
  if (c.horizon == 0) throw ConfigError("horizon must be >= 1");
  if (c.replicates == 0) throw ConfigError("replicates must be >= 1");
  if (!(c.w >= 0.0)) throw ConfigError("w must be >= 0");
  if (c.policies.empty()) throw ConfigError("no policies configured");
  if (c.sweep != SweepAxis::kNone && c.sweep_values.empty()) {
    throw ConfigError("sweep '" + std::string(sweep_axis_name(c.sweep)) +
                      "' needs nonempty sweep_values");
  }
  if (c.sweep == SweepAxis::kNone && !c.sweep_values.empty()) {
    throw ConfigError("sweep_values given but sweep = none");
  }
  for (const PolicySpec& p : c.policies) {
    const std::string name = p.label();
    if (p.params.lockup == 0) throw ConfigError(name + ": L must be >= 1");
    if (!(p.params.gamma > 0.0)) throw ConfigError(name + ": gamma must be > 0");
    if (p.params.epsilon < 0.0 || p.params.epsilon > 1.0) {
      throw ConfigError(name + ": epsilon must lie in [0, 1]");
    }
    if (p.params.delta_refresh == 0) {
      throw ConfigError(name + ": delta_refresh must be >= 1");
    }
    if (p.kind == PolicyKind::kFixed && p.fixed_files.empty()) {
      throw ConfigError(name + ": fixed policy needs files=...");
    }
  }
}

std::string format_config(const ExperimentConfig& c, bool include_runtime) {
  std::ostringstream out;
  if (c.num_files != 0) out << "num_files = " << c.num_files << "\n";
  if (!c.sizes.empty()) {
    out << "sizes = ";
    for (std::size_t i = 0; i < c.sizes.size(); ++i) {
      out << (i ? ", " : "") << c.sizes[i];
    }
    out << "\n";
  } else {
    out << "size_classes = ";
    for (std::size_t i = 0; i < c.size_classes.size(); ++i) {
      out << (i ? ", " : "") << c.size_classes[i].size << ":"
          << c.size_classes[i].count;
    }
    out << "\n";
  }
  out << "size_layout = " << layout_name(c.size_layout) << "\n";
  out << "capacity = " << format_capacity(c.capacity) << "\n";
  out << "max_users = " << c.max_users << "\n";
  out << "zipf_rho = " << format_double(c.zipf_rho) << "\n";
  out << "horizon = " << c.horizon << "\n";
  out << "replicates = " << c.replicates << "\n";
  out << "w = " << format_double(c.w) << "\n";
  out << "L = " << c.policy_defaults.lockup << "\n";
  out << "gamma = " << format_double(c.policy_defaults.gamma) << "\n";
  out << "epsilon = " << format_double(c.policy_defaults.epsilon) << "\n";
  out << "delta_refresh = " << c.policy_defaults.delta_refresh << "\n";
  out << "policies = ";
  for (std::size_t i = 0; i < c.policies.size(); ++i) {
    out << (i ? ", " : "") << c.policies[i].label();
  }
  out << "\n";
  out << "solver = " << (c.solver.kind == SolverKind::kExact ? "exact" : "greedy")
      << "\n";
  out << "greedy_mode = "
      << (c.solver.greedy_mode == GreedyMode::kSkipBlocker ? "skip" : "stop")
      << "\n";
  out << "exact_table_limit = " << c.solver.exact_table_limit << "\n";
  out << "sweep = " << sweep_axis_name(c.sweep) << "\n";
  if (!c.sweep_values.empty()) {
    out << "sweep_values = ";
    for (std::size_t i = 0; i < c.sweep_values.size(); ++i) {
      out << (i ? ", " : "") << c.sweep_values[i];
    }
    out << "\n";
  }
  out << "seed = " << c.seed << "\n";
  out << "full_resolution = " << (c.full_resolution ? "true" : "false") << "\n";
  if (include_runtime) out << "threads = " << c.threads << "\n";
  return out.str();
}

std::string config_fingerprint(const ExperimentConfig& c) {
  return hex64(fnv1a(format_config(c, false)));
}

ExperimentConfig default_paper_config() {
  ExperimentConfig c;
  for (std::uint32_t i = 0; i < 8; ++i) c.size_classes.push_back({1u << i, 50});
  c.capacity = CapacitySpec{false, 512.0};
  c.max_users = 50;
  c.zipf_rho = 0.56;
  c.w = 1.0;
  c.horizon = 50'000;
  c.replicates = 500;
  c.policies = parse_policy_list(
      "cucb, cucbsc-L(L=10), cucbsc-sqrt(gamma=2), eps-greedy(epsilon=0.1), "
      "delta-eps-greedy(delta_refresh=10;epsilon=0.1), mcucbsc-L(L=10), "
      "mcucbsc-sqrt(gamma=2), delta-myopic(delta_refresh=10), iub",
      c.policy_defaults);
  return c;
}

}  // namespace cachebandit
