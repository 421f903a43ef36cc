#pragma once

#include <ostream>

#include "qfs/cli/config.hpp"

namespace qfs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFlagged = 3;

/// Prints the composite basis, reduced matrices and Pauli form; writes CSVs
/// to config.out when `write_csv` is set.
int cmd_reduce(const RunConfig& config, bool write_csv, std::ostream& log);
int cmd_vqe(const RunConfig& config, int jobs, std::ostream& log);
int cmd_sweep(const RunConfig& config, int jobs, std::ostream& log);
/// Plans with 1..(max_scale_factor+1)/2 points for both folding methods.
int cmd_mitigate(const RunConfig& config, int jobs, std::ostream& log);
int cmd_overlap_bench(const RunConfig& config, int jobs, std::ostream& log);
int cmd_oracle(const RunConfig& config, std::ostream& log);

/// Entry point: parses arguments, layers defaults < --config file < QFS_*
/// environment < --set < dedicated flags, then dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfs::cli
