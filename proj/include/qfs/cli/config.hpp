#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qfs/pipeline.hpp"

namespace qfs::cli {

/// Invalid or unknown configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key=value run configuration. Zero `trials` and `max_scale_factor`
/// mean "derive from the command and L" (see resolve()).
struct RunConfig {
  int L = 4;
  double r_start = 0.5;
  double r_stop = 1.4;
  double r_step = 0.1;
  std::string estimator = "sampled";
  std::uint64_t shots = 8192;
  int trials = 0;
  double p1 = NoiseModel::device_default().p1;
  double p2 = NoiseModel::device_default().p2;
  std::vector<int> scale_factors{1, 3};
  std::string folding = "unitary";
  int max_scale_factor = 0;
  std::uint64_t seed = 0;
  std::string out = "results";
  std::vector<double> overlap_p2_levels{0.0, 8e-3};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Keys in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one key from text; throws ConfigError on unknown keys or bad values.
void set_key(RunConfig& config, std::string_view key, std::string_view value);

/// Lines of `key = value`; blank lines and `#` comments ignored.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies QFS_<KEY> variables (key upper-cased, e.g. QFS_R_START) via `getenv`.
void apply_env(RunConfig& config, const std::function<const char*(const char*)>& getenv);

enum class Command : std::uint8_t { reduce, vqe, sweep, mitigate, overlap_bench, oracle };

/// Fills automatic values: trials 100 for mitigation runs and 20 otherwise;
/// max_scale_factor 9 for L = 4 and 7 for L = 6.
RunConfig resolve(RunConfig config, Command command);

/// Range and consistency checks; throws ConfigError.
void validate(const RunConfig& config, Command command);

/// Canonical text form; doubles printed with %.17g so parsing is exact.
std::string serialize(const RunConfig& config);
/// Canonical form annotated with types and defaults.
std::string describe(const RunConfig& config);
/// FNV-1a 64 of serialize(config) with `out` cleared.
std::uint64_t config_hash(const RunConfig& config);
std::string hash_hex(std::uint64_t hash);

pipeline::SweepConfig to_sweep_config(const RunConfig& config, int jobs);

}  // namespace qfs::cli
