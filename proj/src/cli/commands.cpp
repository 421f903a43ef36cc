#include "qfs/cli/commands.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include "qfs/cli/csv.hpp"
#include "qfs/oracle.hpp"
#include "qfs/pipeline.hpp"
#include "qfs/tfim.hpp"
#include "qfs/zne.hpp"

namespace qfs::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (fs::path(c.out) / name).string());
  return f;
}

void write_resolved_config(const RunConfig& c) { open_output(c, "resolved_config.txt") << serialize(c); }

std::string join_scales(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

/// Logs and checks the shift-rule circuit counts for the ansatz.
void log_circuit_counts(const pipeline::Problem& problem, std::ostream& log) {
  const std::vector<double> theta(static_cast<std::size_t>(problem.n_params()), 0.0);
  const int n = problem.n_params();
  for (auto order : {DiffOrder::gradient, DiffOrder::hessian}) {
    const Transform ts[] = {transform::Expand::all_zeros(), transform::Differentiate{order}};
    const auto got = compose(problem.ansatz, theta, ts).circuit_count();
    const auto want = shift_circuit_count(n, order);
    log << "circuit count " << (order == DiffOrder::gradient ? "gradient" : "hessian") << ": " << got
        << " (expected " << want << ")" << (got == want ? "" : " MISMATCH") << "\n";
    if (got != want) throw std::logic_error("shift-rule circuit count mismatch");
  }
}

const std::vector<std::string> kSummaryHeader{
    "r",       "quantity",         "method",      "scale_factors", "folding",          "mean",
    "std",     "n_trials",         "condition_number_max",         "seed",             "exact",
    "mean_per_site", "std_per_site", "exact_per_site", "abs_err_per_trial", "abs_err_of_mean",
    "n_failed", "n_truncated",     "flagged",     "config_hash"};

const std::vector<std::string> kTrialHeader{
    "r_index", "r",  "trial", "scale_factors", "folding", "seed", "energy", "energy_var", "d2E_dr2", "d2E_dr2_var",
    "fidelity_susceptibility", "fidelity_susceptibility_var", "condition_number", "residual_norm", "truncated",
    "failed",  "error", "config_hash"};

void write_summary_rows(CsvWriter& w, const pipeline::SweepResult& res, const pipeline::SweepConfig& sc,
                        const std::string& method, const std::string& hash) {
  const double L = sc.L;
  for (const auto& p : res.points) {
    struct Q {
      const char* name;
      const pipeline::Stats* stats;
      double exact;
      const zne::MitigationError* err;
    };
    const Q qs[] = {{"energy", &p.energy, p.exact_energy, &p.energy_error},
                    {"d2E_dr2", &p.d2E, p.exact_d2E, &p.d2E_error},
                    {"fidelity_susceptibility", &p.fs, p.exact_fs, &p.fs_error}};
    for (const auto& q : qs) {
      w.field(p.r).field(q.name).field(method).field(join_scales(sc.plan.scale_factors));
      w.field(zne::to_string(sc.plan.folding)).field(q.stats->mean).field(q.stats->std).field(q.stats->n);
      w.field(p.condition_number_max).field(sc.seed).field(q.exact).field(q.stats->mean / L);
      w.field(q.stats->std / L).field(q.exact / L).field(q.err->per_trial_mean).field(q.err->of_mean);
      w.field(p.n_failed).field(p.n_truncated).field(p.flagged).field(hash);
      w.end_row();
    }
  }
}

void write_trial_rows(CsvWriter& w, const pipeline::SweepResult& res, const pipeline::SweepConfig& sc,
                      const std::string& hash) {
  for (const auto& t : res.trials) {
    w.field(t.r_index).field(t.r).field(t.trial).field(join_scales(sc.plan.scale_factors));
    w.field(zne::to_string(sc.plan.folding)).field(t.seed);
    w.field(t.cell.energy.value).field(t.cell.energy.variance).field(t.cell.d2E.value).field(t.cell.d2E.variance);
    w.field(t.cell.fs.value).field(t.cell.fs.variance).field(t.cell.condition_number).field(t.cell.residual_norm);
    w.field(t.cell.truncated).field(t.failed).field(t.error).field(hash);
    w.end_row();
  }
}

bool any_flagged(const pipeline::SweepResult& res) {
  for (const auto& p : res.points) {
    if (p.flagged) return true;
  }
  return false;
}

}  // namespace

int cmd_reduce(const RunConfig& config, bool write_csv, std::ostream& log) {
  const int L = config.L;
  const auto h = tfim::reduce(L);
  const auto obs = tfim::reduced_observable(h);
  const auto hash = hash_hex(config_hash(config));
  log << "L = " << L << ": " << h.basis.size() << " composite basis states on " << obs.width() << " qubits\n";
  for (int k = 0; k < h.basis.size(); ++k) {
    const auto& o = h.basis.orbits[static_cast<std::size_t>(k)];
    log << "  [" << k << "] {";
    for (std::size_t m = 0; m < o.members.size(); ++m) log << (m ? "," : "") << tfim::config_string(o.members[m], L);
    log << "}\n";
  }
  auto print_matrix = [&](const char* label, const Eigen::MatrixXd& m) {
    log << label << ":\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      log << "  ";
      for (Eigen::Index j = 0; j < m.cols(); ++j) log << std::setw(12) << format_double(m(i, j)) << ' ';
      log << "\n";
    }
  };
  print_matrix("H0", h.H0);
  print_matrix("H1", h.H1);
  log << "Pauli form (H = H0 + r H1):\n";
  for (const auto& t : obs.terms()) {
    log << "  " << (t.partition == Partition::H0 ? "H0 " : "H1 ") << std::setw(24) << format_double(t.coeff) << "  "
        << t.string.ops() << "  (" << t.string.label() << ")\n";
  }
  if (!write_csv) return kExitOk;
  write_resolved_config(config);
  {
    auto f = open_output(config, "reduce_basis.csv");
    CsvWriter w(f, {"L", "index", "representative", "size", "members", "seed", "config_hash"});
    for (int k = 0; k < h.basis.size(); ++k) {
      const auto& o = h.basis.orbits[static_cast<std::size_t>(k)];
      std::string members;
      for (std::size_t m = 0; m < o.members.size(); ++m) members += (m ? ";" : "") + tfim::config_string(o.members[m], L);
      w.field(L).field(k).field(tfim::config_string(o.representative, L)).field(static_cast<int>(o.members.size()));
      w.field(members).field(config.seed).field(hash);
      w.end_row();
    }
  }
  {
    auto f = open_output(config, "reduce_matrix.csv");
    CsvWriter w(f, {"partition", "row", "col", "value", "seed", "config_hash"});
    for (const auto& [label, m] : {std::pair{"H0", &h.H0}, std::pair{"H1", &h.H1}}) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) {
        for (Eigen::Index j = 0; j < m->cols(); ++j) {
          w.field(label).field(static_cast<std::int64_t>(i)).field(static_cast<std::int64_t>(j)).field((*m)(i, j));
          w.field(config.seed).field(hash);
          w.end_row();
        }
      }
    }
  }
  {
    auto f = open_output(config, "reduce_pauli.csv");
    CsvWriter w(f, {"partition", "pauli", "label", "coeff", "seed", "config_hash"});
    for (const auto& t : obs.terms()) {
      w.field(t.partition == Partition::H0 ? "H0" : "H1").field(t.string.ops()).field(t.string.label());
      w.field(t.coeff).field(config.seed).field(hash);
      w.end_row();
    }
  }
  return kExitOk;
}

int cmd_vqe(const RunConfig& config, int jobs, std::ostream& log) {
  const auto problem = pipeline::Problem::make(config.L);
  const auto rs = pipeline::r_grid(config.r_start, config.r_stop, config.r_step);
  const auto results = pipeline::solve_vqe_grid(problem, rs, jobs);
  const auto hash = hash_hex(config_hash(config));
  write_resolved_config(config);
  auto f = open_output(config, "vqe.csv");
  CsvWriter w(f, {"r", "energy", "exact_energy", "abs_error", "iterations", "converged", "gradient_max", "theta",
                  "seed", "config_hash"});
  bool flagged = false;
  ExactEstimator exact;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto& v = results[i];
    const double e0 = oracle::ground_energy_reduced(config.L, rs[i]);
    const auto g = grad_expectation(problem.ansatz, v.theta_opt, problem.H(rs[i]), exact);
    double gmax = 0.0;
    for (double x : g.values) gmax = std::max(gmax, std::abs(x));
    flagged = flagged || !v.converged;
    w.field(rs[i]).field(v.energy).field(e0).field(std::abs(v.energy - e0)).field(v.iterations).field(v.converged);
    w.field(gmax).field(join_values(v.theta_opt)).field(config.seed).field(hash);
    w.end_row();
    log << "r=" << format_double(rs[i]) << " E=" << format_double(v.energy) << " |dE|=" << std::abs(v.energy - e0)
        << " iterations=" << v.iterations << (v.converged ? "" : " NOT CONVERGED") << "\n";
  }
  return flagged ? kExitFlagged : kExitOk;
}

int cmd_sweep(const RunConfig& config, int jobs, std::ostream& log) {
  const auto sc = to_sweep_config(config, jobs);
  log_circuit_counts(pipeline::Problem::make(config.L), log);
  const auto res = pipeline::sweep(sc);
  const auto hash = hash_hex(config_hash(config));
  write_resolved_config(config);
  {
    auto f = open_output(config, "sweep_summary.csv");
    CsvWriter w(f, kSummaryHeader);
    write_summary_rows(w, res, sc, config.estimator, hash);
  }
  {
    auto f = open_output(config, "sweep_trials.csv");
    CsvWriter w(f, kTrialHeader);
    write_trial_rows(w, res, sc, hash);
  }
  for (const auto& p : res.points) {
    log << "r=" << format_double(p.r) << " S/L=" << format_double(p.fs.mean / config.L) << " (exact "
        << format_double(p.exact_fs / config.L) << ") d2E/L=" << format_double(p.d2E.mean / config.L) << " (exact "
        << format_double(p.exact_d2E / config.L) << ")" << (p.flagged ? " FLAGGED" : "") << "\n";
  }
  return any_flagged(res) ? kExitFlagged : kExitOk;
}

int cmd_mitigate(const RunConfig& config, int jobs, std::ostream& log) {
  const auto hash = hash_hex(config_hash(config));
  write_resolved_config(config);
  auto fs_ = open_output(config, "mitigation_summary.csv");
  auto ft = open_output(config, "mitigation_trials.csv");
  CsvWriter summary(fs_, kSummaryHeader);
  CsvWriter trials(ft, kTrialHeader);
  bool flagged = false;
  const int n_max = (config.max_scale_factor - 1) / 2;
  for (auto method : {zne::FoldMethod::unitary, zne::FoldMethod::cnot}) {
    for (int n = 0; n <= n_max; ++n) {
      auto sc = to_sweep_config(config, jobs);
      sc.estimator = pipeline::EstimatorKind::mitigated;
      sc.plan = zne::MitigationPlan::with_points(n, method, config.shots);
      const auto res = pipeline::sweep(sc);
      write_summary_rows(summary, res, sc, "mitigated", hash);
      write_trial_rows(trials, res, sc, hash);
      flagged = flagged || any_flagged(res);
      log << "plan " << join_scales(sc.plan.scale_factors) << " " << zne::to_string(method) << " done\n";
    }
  }
  return flagged ? kExitFlagged : kExitOk;
}

int cmd_overlap_bench(const RunConfig& config, int jobs, std::ostream& log) {
  overlap::ReportConfig rc;
  rc.L = config.L;
  rc.r_values = pipeline::r_grid(config.r_start, config.r_stop, config.r_step);
  for (double p2 : config.overlap_p2_levels) rc.noise_levels.push_back({p2 == 0.0 ? 0.0 : config.p1, p2});
  rc.shots = config.shots;
  rc.trials = config.trials;
  rc.seed = config.seed;
  rc.jobs = jobs;
  const auto rows = overlap::noise_sensitivity_report(rc);
  const auto hash = hash_hex(config_hash(config));
  write_resolved_config(config);
  auto f = open_output(config, "overlap_bench.csv");
  CsvWriter w(f, {"r", "method", "p1", "p2", "mean", "std", "exact", "mean_abs_dev", "dev_of_mean", "two_qubit_gates",
                  "n_trials", "implemented", "seed", "config_hash"});
  for (const auto& row : rows) {
    w.field(row.r).field(row.method).field(row.p1).field(row.p2);
    if (row.placeholder) {
      w.empty().empty().field(row.exact).empty().empty().empty().field(0).field(false);
    } else {
      w.field(row.mean).field(row.std).field(row.exact).field(row.mean_abs_dev).field(row.dev_of_mean);
      w.field(static_cast<std::uint64_t>(row.two_qubit_gates)).field(row.n_trials).field(true);
    }
    w.field(config.seed).field(hash);
    w.end_row();
  }
  log << "wrote " << rows.size() << " overlap rows\n";
  return kExitOk;
}

int cmd_oracle(const RunConfig& config, std::ostream& log) {
  const auto rs = pipeline::r_grid(config.r_start, config.r_stop, config.r_step);
  const auto hash = hash_hex(config_hash(config));
  write_resolved_config(config);
  auto f = open_output(config, "oracle.csv");
  CsvWriter w(f, {"r", "L", "E0_reduced", "E0_full", "dE_dr", "d2E_dr2", "fs_spectral", "fs_finite_difference",
                  "d2E_dr2_per_site", "fs_per_site", "seed", "config_hash"});
  const int L = config.L;
  for (double r : rs) {
    const double d2 = oracle::d2E_finite_difference(L, r);
    const double fs = oracle::fs_spectral(L, r);
    w.field(r).field(L).field(oracle::ground_energy_reduced(L, r)).field(oracle::ground_energy_full(L, r));
    w.field(oracle::dE_finite_difference(L, r)).field(d2).field(fs).field(oracle::fs_finite_difference(L, r));
    w.field(d2 / L).field(fs / L).field(config.seed).field(hash);
    w.end_row();
  }
  log << "wrote oracle values for " << rs.size() << " grid points\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fidelity susceptibility of the transverse-field Ising chain via parameter-shift circuits"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> L;
  std::vector<std::string> sets;
  bool print_config = false;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--jobs", jobs, "worker threads for (r, trial) cells")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("-L,--L", L, "number of spins");
  app.add_option("--set", sets, "override a config key (key=value), repeatable");
  app.add_flag("--print-config", print_config, "print the resolved config with types and defaults, then exit");

  struct Sub {
    const char* name;
    Command command;
    const char* help;
  };
  const Sub subs[] = {
      {"reduce", Command::reduce, "composite basis, reduced matrices, Pauli decomposition"},
      {"vqe", Command::vqe, "VQE ground states on the r grid"},
      {"sweep", Command::sweep, "energy, d2E/dr2 and fidelity susceptibility over the r grid"},
      {"mitigate", Command::mitigate, "zero-noise extrapolation study over plans and folding methods"},
      {"overlap-bench", Command::overlap_bench, "overlap-method noise sensitivity"},
      {"oracle", Command::oracle, "exact-diagonalization reference values"},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  Command command = Command::reduce;
  for (const auto& s : subs) {
    if (app.got_subcommand(s.name)) command = s.command;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    apply_env(config, [](const char* name) { return std::getenv(name); });
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_key(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (L) config.L = *L;
    if (seed) config.seed = *seed;
    if (out_dir) config.out = *out_dir;
    config = resolve(config, command);
    validate(config, command);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (print_config) {
    out << describe(config);
    return kExitOk;
  }

  try {
    switch (command) {
      case Command::reduce: return cmd_reduce(config, out_dir.has_value(), out);
      case Command::vqe: return cmd_vqe(config, jobs, out);
      case Command::sweep: return cmd_sweep(config, jobs, out);
      case Command::mitigate: return cmd_mitigate(config, jobs, out);
      case Command::overlap_bench: return cmd_overlap_bench(config, jobs, out);
      case Command::oracle: return cmd_oracle(config, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace qfs::cli
