#include <algorithm>
#include <cmath>

#include "qfs/oracle.hpp"
#include "qfs/overlap.hpp"
#include "qfs/pipeline.hpp"

namespace qfs::overlap {

std::vector<ReportRow> noise_sensitivity_report(const ReportConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.noise_levels.empty()) throw std::invalid_argument("at least one noise level is required");
  const auto problem = pipeline::Problem::make(config.L);
  const auto vqes = pipeline::solve_vqe_grid(problem, config.r_values, config.jobs);
  const auto n_r = config.r_values.size();
  const auto n_levels = config.noise_levels.size();
  const auto n_methods = config.methods.size();
  const auto trials = static_cast<std::size_t>(config.trials);

  // values[((ri * n_levels + li) * trials + t) * n_methods + m]
  std::vector<double> values(n_r * n_levels * trials * n_methods, 0.0);
  const auto n_cells = static_cast<std::int64_t>(n_r * n_levels * trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, config.jobs))
  for (std::int64_t k = 0; k < n_cells; ++k) {
    const auto cell = static_cast<std::size_t>(k);
    const auto t = cell % trials;
    const auto li = (cell / trials) % n_levels;
    const auto ri = cell / (trials * n_levels);
    const auto& theta = vqes[ri].theta_opt;
    const double r = config.r_values[ri];
    const auto noise = config.noise_levels[li];
    const auto base = derive_seed(config.seed, {ri, li, t});
    SampledEstimator response_est(config.shots, noise, derive_seed(base, {0}));
    const auto hess = hessian_expectation(problem.ansatz, theta, problem.H(r), response_est);
    const auto grad = grad_expectation(problem.ansatz, theta, problem.H1(), response_est);
    const auto response = pipeline::solve_response(hess, grad);
    for (std::size_t m = 0; m < n_methods; ++m) {
      SampledEstimator est(config.shots, noise, derive_seed(base, {1 + m}));
      values[cell * n_methods + m] =
          pipeline::susceptibility_for_method(problem, theta, response, config.methods[m], est).value;
    }
  }

  std::vector<ReportRow> rows;
  for (std::size_t ri = 0; ri < n_r; ++ri) {
    const double r = config.r_values[ri];
    const double exact = oracle::fs_spectral(config.L, r);
    for (std::size_t li = 0; li < n_levels; ++li) {
      const auto noise = config.noise_levels[li];
      for (std::size_t m = 0; m < n_methods; ++m) {
        const Method method = config.methods[m];
        std::vector<double> v;
        for (std::size_t t = 0; t < trials; ++t) v.push_back(values[((ri * n_levels + li) * trials + t) * n_methods + m]);
        const auto stats = pipeline::summarize(v);
        const auto err = zne::absolute_mitigation_error(v, exact);
        const OverlapJob job{problem.ansatz.bound(vqes[ri].theta_opt), problem.ansatz, method};
        ReportRow row;
        row.r = r;
        row.method = std::string(to_string(method));
        row.p1 = noise.p1;
        row.p2 = noise.p2;
        row.mean = stats.mean;
        row.std = stats.std;
        row.exact = exact;
        row.mean_abs_dev = err.per_trial_mean;
        row.dev_of_mean = err.of_mean;
        row.two_qubit_gates = build_overlap_circuit(job).multi_qubit_gate_count();
        row.n_trials = stats.n;
        rows.push_back(std::move(row));
      }
      for (const char* name : {"ancilla_based", "bell_based"}) {
        ReportRow row;
        row.r = r;
        row.method = name;
        row.p1 = noise.p1;
        row.p2 = noise.p2;
        row.exact = exact;
        row.placeholder = true;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace qfs::overlap
