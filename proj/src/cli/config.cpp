#include "qfs/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qfs/cli/csv.hpp"

namespace qfs::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                    std::string(expected) + ")");
}

template <typename T>
T parse_int(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) bad_value(key, text, "an integer");
  return v;
}

double parse_double(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) bad_value(key, text, "a number");
  return v;
}

template <typename T, typename F>
std::vector<T> parse_list(std::string_view text, F parse_one) {
  std::vector<T> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) out.push_back(parse_one(item));
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string value_of(const RunConfig& c, std::string_view key) {
  if (key == "L") return std::to_string(c.L);
  if (key == "r_start") return format_double(c.r_start);
  if (key == "r_stop") return format_double(c.r_stop);
  if (key == "r_step") return format_double(c.r_step);
  if (key == "estimator") return c.estimator;
  if (key == "shots") return std::to_string(c.shots);
  if (key == "trials") return std::to_string(c.trials);
  if (key == "p1") return format_double(c.p1);
  if (key == "p2") return format_double(c.p2);
  if (key == "scale_factors") return join_ints(c.scale_factors);
  if (key == "folding") return c.folding;
  if (key == "max_scale_factor") return std::to_string(c.max_scale_factor);
  if (key == "seed") return std::to_string(c.seed);
  if (key == "out") return c.out;
  if (key == "overlap_p2_levels") return join_doubles(c.overlap_p2_levels);
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string_view type_of(std::string_view key) {
  if (key == "L" || key == "trials" || key == "max_scale_factor") return "int";
  if (key == "shots" || key == "seed") return "uint64";
  if (key == "estimator") return "exact|sampled|noisy|mitigated";
  if (key == "folding") return "unitary|cnot";
  if (key == "scale_factors") return "odd ints, comma separated, starting at 1";
  if (key == "overlap_p2_levels") return "numbers, comma separated";
  if (key == "out") return "path";
  return "number";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "L",     "r_start", "r_stop",        "r_step",  "estimator",        "shots", "trials",
      "p1",    "p2",      "scale_factors", "folding", "max_scale_factor", "seed",  "out",
      "overlap_p2_levels"};
  return keys;
}

void set_key(RunConfig& c, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "L") {
    c.L = parse_int<int>(key, v);
  } else if (key == "r_start") {
    c.r_start = parse_double(key, v);
  } else if (key == "r_stop") {
    c.r_stop = parse_double(key, v);
  } else if (key == "r_step") {
    c.r_step = parse_double(key, v);
  } else if (key == "estimator") {
    try {
      (void)pipeline::parse_estimator(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.estimator = v;
  } else if (key == "shots") {
    c.shots = parse_int<std::uint64_t>(key, v);
  } else if (key == "trials") {
    c.trials = parse_int<int>(key, v);
  } else if (key == "p1") {
    c.p1 = parse_double(key, v);
  } else if (key == "p2") {
    c.p2 = parse_double(key, v);
  } else if (key == "scale_factors") {
    c.scale_factors = parse_list<int>(v, [&](const std::string& s) { return parse_int<int>(key, s); });
  } else if (key == "folding") {
    try {
      (void)zne::parse_fold_method(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.folding = v;
  } else if (key == "max_scale_factor") {
    c.max_scale_factor = parse_int<int>(key, v);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "out") {
    c.out = v;
  } else if (key == "overlap_p2_levels") {
    c.overlap_p2_levels = parse_list<double>(v, [&](const std::string& s) { return parse_double(key, s); });
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::stringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    set_key(base, trim(body.substr(0, eq)), body.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

void apply_env(RunConfig& config, const std::function<const char*(const char*)>& getenv) {
  for (const auto& key : config_keys()) {
    std::string var = "QFS_";
    for (char ch : key) var += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* v = getenv(var.c_str())) set_key(config, key, v);
  }
}

RunConfig resolve(RunConfig c, Command command) {
  if (c.trials == 0) {
    const bool mitigation = command == Command::mitigate || c.estimator == "mitigated";
    c.trials = mitigation ? 100 : 20;
  }
  if (c.max_scale_factor == 0) c.max_scale_factor = c.L == 6 ? 7 : 9;
  return c;
}

void validate(const RunConfig& c, Command command) {
  if (command == Command::reduce) {
    if (c.L % 2 != 0) throw ConfigError("odd L unsupported: L = " + std::to_string(c.L));
    if (c.L < tfim::kMinSites || c.L > tfim::kMaxSites) throw ConfigError("L must lie in [2, 12]");
    return;
  }
  if (c.L % 2 != 0) throw ConfigError("odd L unsupported: L = " + std::to_string(c.L));
  if (c.L != 4 && c.L != 6) throw ConfigError("L must be 4 or 6 for this command");
  if (!(c.r_step > 0.0) || !(c.r_stop >= c.r_start) || !(c.r_start >= 0.0)) {
    throw ConfigError("r grid requires 0 <= r_start <= r_stop and r_step > 0");
  }
  try {
    (void)pipeline::parse_estimator(c.estimator);
    (void)zne::parse_fold_method(c.folding);
    (void)zne::MitigationPlan::make(c.scale_factors, zne::parse_fold_method(c.folding), std::max<std::uint64_t>(1, c.shots));
    NoiseModel{c.p1, c.p2}.validate();
    for (double p : c.overlap_p2_levels) NoiseModel{c.p1, p}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.shots == 0) throw ConfigError("shots must be >= 1");
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.max_scale_factor < 1 || c.max_scale_factor % 2 == 0 || c.max_scale_factor > 9) {
    throw ConfigError("max_scale_factor must be odd and in [1, 9]");
  }
  if (c.overlap_p2_levels.empty()) throw ConfigError("overlap_p2_levels must not be empty");
  if (c.out.empty()) throw ConfigError("out must not be empty");
}

std::string serialize(const RunConfig& c) {
  std::string s;
  for (const auto& key : config_keys()) s += key + "=" + value_of(c, key) + "\n";
  return s;
}

std::string describe(const RunConfig& c) {
  const RunConfig defaults;
  std::string s;
  for (const auto& key : config_keys()) {
    s += "# " + key + ": " + std::string(type_of(key)) + ", default " + value_of(defaults, key) + "\n";
    s += key + "=" + value_of(c, key) + "\n";
  }
  return s;
}

std::uint64_t config_hash(const RunConfig& c) {
  // The output directory does not affect results.
  RunConfig keyed = c;
  keyed.out.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(keyed)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

pipeline::SweepConfig to_sweep_config(const RunConfig& c, int jobs) {
  pipeline::SweepConfig s;
  s.L = c.L;
  s.r_values = pipeline::r_grid(c.r_start, c.r_stop, c.r_step);
  s.estimator = pipeline::parse_estimator(c.estimator);
  s.shots = c.shots;
  s.trials = c.trials;
  s.noise = {c.p1, c.p2};
  s.plan = zne::MitigationPlan::make(c.scale_factors, zne::parse_fold_method(c.folding), c.shots);
  s.seed = c.seed;
  s.jobs = jobs;
  return s;
}

}  // namespace qfs::cli
