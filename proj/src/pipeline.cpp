#include "qfs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfs/ansatz.hpp"
#include "qfs/oracle.hpp"

namespace qfs::pipeline {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Pinv {
  Eigen::MatrixXd matrix;
  double condition = 1.0;
  bool truncated = false;
  int rank = 0;
};

Pinv pseudo_inverse(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Pinv p;
  const Eigen::Index n = s.size();
  const double smax = n > 0 ? s(0) : 0.0;
  const double smin = n > 0 ? s(n - 1) : 0.0;
  p.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (smax > 0.0 && s(i) >= kPinvCutoff * smax) {
      inv(i) = 1.0 / s(i);
      ++p.rank;
    } else {
      p.truncated = true;
    }
  }
  p.matrix = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return p;
}

Eigen::VectorXd as_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Transform> stages(transform::Expand expand, DiffOrder order, const transform::Fold* fold) {
  std::vector<Transform> ts{std::move(expand)};
  if (order != DiffOrder::none) ts.emplace_back(transform::Differentiate{order});
  if (fold) ts.emplace_back(*fold);
  return ts;
}

}  // namespace

Problem Problem::make(int L) {
  auto reduced = tfim::reduce(L);
  auto obs = tfim::reduced_observable(reduced);
  const int n = obs.width();
  if (n != 2 && n != 3) throw std::invalid_argument("pipeline supports L = 4 or 6, got " + std::to_string(L));
  return {L, std::move(reduced), std::move(obs), ansatz::build_ansatz(n)};
}

VqeResult vqe(const PauliObservable& obs, const Circuit& circuit, double r, std::optional<double> exact_E0,
              const VqeOptions& options) {
  const auto h = obs.at(r);
  ExactEstimator exact;
  VqeResult res;
  res.theta_opt.assign(static_cast<std::size_t>(circuit.n_params()), 0.0);
  auto energy = [&] { return expectation(run(circuit, res.theta_opt), h); };
  auto step = [&](const GradientResult& g) {
    for (std::size_t i = 0; i < res.theta_opt.size(); ++i) res.theta_opt[i] -= options.step * g.values[i];
    ++res.iterations;
  };
  for (;;) {
    res.energy = energy();
    if (exact_E0 && std::abs(res.energy - *exact_E0) < options.energy_tolerance) {
      res.converged = true;
      break;
    }
    if (res.iterations >= options.max_iterations) break;
    const auto g = grad_expectation(circuit, res.theta_opt, h, exact);
    if (!exact_E0 && max_abs(g.values) < options.gradient_tolerance) {
      res.converged = true;
      break;
    }
    step(g);
  }
  if (res.converged && options.polish_gradient > 0.0) {
    for (int k = 0; k < options.max_iterations; ++k) {
      const auto g = grad_expectation(circuit, res.theta_opt, h, exact);
      if (max_abs(g.values) < options.polish_gradient) break;
      step(g);
    }
    res.energy = energy();
  }
  return res;
}

ResponseSolution solve_response(const HessianResult& hess, const GradientResult& grad_h1) {
  const auto n = hess.values.rows();
  if (hess.values.cols() != n || static_cast<Eigen::Index>(grad_h1.values.size()) != n) {
    throw std::invalid_argument("Hessian and gradient dimensions do not match");
  }
  const auto p = pseudo_inverse(hess.values);
  const Eigen::VectorXd g = as_vector(grad_h1.values);
  const Eigen::VectorXd x = -(p.matrix * g);
  ResponseSolution s;
  s.dtheta_dr.assign(x.data(), x.data() + x.size());
  s.condition_number = p.condition;
  s.residual_norm = n > 0 ? (hess.values * x + g).cwiseAbs().maxCoeff() : 0.0;
  s.truncated = p.truncated;
  s.rank = p.rank;
  return s;
}

double second_energy_derivative(const GradientResult& grad_h1, const ResponseSolution& response) {
  if (grad_h1.values.size() != response.dtheta_dr.size()) throw std::invalid_argument("length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < response.dtheta_dr.size(); ++i) acc += grad_h1.values[i] * response.dtheta_dr[i];
  return acc;
}

double fidelity_susceptibility(const HessianResult& overlap_hessian, const ResponseSolution& response,
                               double factor) {
  const auto x = as_vector(response.dtheta_dr);
  if (overlap_hessian.values.rows() != x.size()) throw std::invalid_argument("length mismatch");
  return std::abs(factor * x.dot(overlap_hessian.values * x));
}

double second_energy_derivative_variance(const HessianResult& hess, const GradientResult& grad_h1,
                                         const ResponseSolution& response) {
  const auto x = as_vector(response.dtheta_dr);
  const auto n = x.size();
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) var += 4.0 * x(i) * x(i) * grad_h1.variances[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double d = (i == j ? 1.0 : 2.0) * x(i) * x(j);
      var += d * d * hess.variances(i, j);
    }
  }
  return var;
}

double fidelity_susceptibility_variance(const HessianResult& hess, const GradientResult& grad_h1,
                                        const HessianResult& overlap_hessian, const ResponseSolution& response,
                                        double factor) {
  const auto x = as_vector(response.dtheta_dr);
  const auto n = x.size();
  const Eigen::VectorXd bx = overlap_hessian.values * x;
  const double sign = factor * x.dot(bx) < 0.0 ? -1.0 : 1.0;
  const Eigen::VectorXd v = 2.0 * sign * factor * bx;  // dS/dx
  const Eigen::VectorXd u = -(pseudo_inverse(hess.values).matrix * v);  // dS/dgrad
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) var += u(i) * u(i) * grad_h1.variances[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double da = i == j ? u(i) * x(i) : u(i) * x(j) + u(j) * x(i);
      const double db = sign * factor * (i == j ? 1.0 : 2.0) * x(i) * x(j);
      var += da * da * hess.variances(i, j) + db * db * overlap_hessian.variances(i, j);
    }
  }
  return var;
}

Estimate susceptibility_for_method(const Problem& problem, std::span<const double> theta,
                                   const ResponseSolution& response, overlap::Method method,
                                   Estimator& estimator, const transform::Fold* fold) {
  const overlap::OverlapJob job{problem.ansatz.bound(theta), problem.ansatz, method};
  const auto b = overlap::overlap_hessian(job, theta, estimator, fold);
  const double f = overlap::susceptibility_factor(method);
  // Response variances are accounted for by the caller; here only the readout Hessian.
  const HessianResult zero_hess{Eigen::MatrixXd::Identity(b.values.rows(), b.values.cols()),
                                Eigen::MatrixXd::Zero(b.values.rows(), b.values.cols())};
  const GradientResult zero_grad{std::vector<double>(response.dtheta_dr.size(), 0.0),
                                 std::vector<double>(response.dtheta_dr.size(), 0.0)};
  return {fidelity_susceptibility(b, response, f),
          fidelity_susceptibility_variance(zero_hess, zero_grad, b, response, f), 0};
}

CellResult compute_cell(const Problem& problem, double r, std::span<const double> theta, Estimator& estimator,
                        const CellOptions& options) {
  std::optional<transform::Fold> fold_storage;
  if (options.plan) fold_storage = zne::fold_transform(*options.plan);
  const transform::Fold* fold = fold_storage ? &*fold_storage : nullptr;

  const auto h = problem.H(r);
  CellResult cell;
  if (options.estimate_energy) {
    const auto b = compose(problem.ansatz, theta, stages(transform::Expand::observable(h), DiffOrder::none, fold));
    cell.energy = execute(b, estimator).front();
  }
  const auto hb = compose(problem.ansatz, theta, stages(transform::Expand::observable(h), DiffOrder::hessian, fold));
  const auto hess_raw = execute(hb, estimator);
  const auto hess = to_hessian(hb, hess_raw);
  const std::uint64_t shots = hess_raw.empty() ? 0 : hess_raw.front().shots;
  const auto gb =
      compose(problem.ansatz, theta, stages(transform::Expand::observable(problem.H1()), DiffOrder::gradient, fold));
  const auto grad = to_gradient(gb, execute(gb, estimator));
  const auto response = solve_response(hess, grad);

  const overlap::OverlapJob job{problem.ansatz.bound(theta), problem.ansatz, options.method};
  const auto ov = overlap::overlap_hessian(job, theta, estimator, fold);
  const double f = overlap::susceptibility_factor(options.method);

  cell.d2E = {second_energy_derivative(grad, response), second_energy_derivative_variance(hess, grad, response),
              shots};
  cell.fs = {fidelity_susceptibility(ov, response, f),
             fidelity_susceptibility_variance(hess, grad, ov, response, f), shots};
  cell.condition_number = response.condition_number;
  cell.residual_norm = response.residual_norm;
  cell.truncated = response.truncated;
  cell.dtheta_dr = response.dtheta_dr;
  return cell;
}

PointResult compute_point(const Problem& problem, double r, std::span<const double> theta) {
  ExactEstimator exact;
  const auto cell = compute_cell(problem, r, theta, exact);
  const double L = problem.L;
  return {r,
          cell.energy,
          cell.d2E,
          cell.fs,
          cell.energy.value / L,
          cell.d2E.value / L,
          cell.fs.value / L,
          cell.condition_number};
}

double overlap_gradient_norm(const Problem& problem, std::span<const double> theta) {
  ExactEstimator exact;
  const overlap::OverlapJob job{problem.ansatz.bound(theta), problem.ansatz, overlap::Method::compute_uncompute};
  return max_abs(overlap::overlap_gradient(job, theta, exact).values);
}

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::exact: return "exact";
    case EstimatorKind::sampled: return "sampled";
    case EstimatorKind::noisy: return "noisy";
    case EstimatorKind::mitigated: return "mitigated";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view s) {
  for (auto k : {EstimatorKind::exact, EstimatorKind::sampled, EstimatorKind::noisy, EstimatorKind::mitigated}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown estimator '" + std::string(s) + "'");
}

NoiseModel effective_noise(const SweepConfig& config) {
  return (config.estimator == EstimatorKind::noisy || config.estimator == EstimatorKind::mitigated) ? config.noise
                                                                                                     : NoiseModel{};
}

std::vector<double> r_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("r_step must be positive");
  if (stop < start) throw std::invalid_argument("r_stop must be >= r_start");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double r = start + k * step;
    if (r > stop + 0.5 * step) break;
    // Round to 12 decimals so that 0.5 + 7 * 0.1 prints as 1.2.
    out.push_back(std::round(r * 1e12) / 1e12);
  }
  return out;
}

Stats summarize(std::span<const double> values) {
  Stats s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    s.mean = *lo;
    return s;
  }
  for (double v : values) s.mean += v;
  s.mean /= s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

std::vector<VqeResult> solve_vqe_grid(const Problem& problem, std::span<const double> r_values, int jobs) {
  std::vector<VqeResult> out(r_values.size());
  const auto n = static_cast<std::int64_t>(r_values.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (std::int64_t i = 0; i < n; ++i) {
    const double r = r_values[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        vqe(problem.observable, problem.ansatz, r, oracle::ground_energy_reduced(problem.L, r));
  }
  return out;
}

SweepResult sweep(const SweepConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.r_values.empty()) throw std::invalid_argument("empty r grid");
  const auto problem = Problem::make(config.L);
  const auto noise = effective_noise(config);
  const auto& rs = config.r_values;
  const auto vqes = solve_vqe_grid(problem, rs, config.jobs);

  SweepResult result;
  result.points.resize(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    auto& p = result.points[i];
    p.r = rs[i];
    p.vqe = vqes[i];
    p.exact_energy = oracle::ground_energy_reduced(config.L, rs[i]);
    p.exact_d2E = oracle::d2E_finite_difference(config.L, rs[i]);
    p.exact_fs = oracle::fs_spectral(config.L, rs[i]);
    p.overlap_gradient_norm = overlap_gradient_norm(problem, vqes[i].theta_opt);
  }

  const int trials = config.trials;
  const auto n_cells = static_cast<std::int64_t>(rs.size()) * trials;
  result.trials.resize(static_cast<std::size_t>(n_cells));
  CellOptions options;
  if (config.estimator == EstimatorKind::mitigated) options.plan = config.plan;

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, config.jobs))
  for (std::int64_t k = 0; k < n_cells; ++k) {
    const auto ri = static_cast<int>(k / trials);
    const auto t = static_cast<int>(k % trials);
    auto& rec = result.trials[static_cast<std::size_t>(k)];
    rec.r_index = ri;
    rec.r = rs[static_cast<std::size_t>(ri)];
    rec.trial = t;
    rec.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(ri), static_cast<std::uint64_t>(t)});
    try {
      std::unique_ptr<Estimator> est;
      if (config.estimator == EstimatorKind::exact) {
        est = std::make_unique<ExactEstimator>();
      } else {
        est = std::make_unique<SampledEstimator>(config.shots, noise, rec.seed);
      }
      rec.cell = compute_cell(problem, rec.r, vqes[static_cast<std::size_t>(ri)].theta_opt, *est, options);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  }

  for (std::size_t i = 0; i < rs.size(); ++i) {
    auto& p = result.points[i];
    std::vector<double> e, d, f;
    for (int t = 0; t < trials; ++t) {
      const auto& rec = result.trials[i * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      if (rec.failed) {
        ++p.n_failed;
        continue;
      }
      if (rec.cell.truncated) ++p.n_truncated;
      e.push_back(rec.cell.energy.value);
      d.push_back(rec.cell.d2E.value);
      f.push_back(rec.cell.fs.value);
      p.condition_number_max = std::max(p.condition_number_max, rec.cell.condition_number);
    }
    p.energy = summarize(e);
    p.d2E = summarize(d);
    p.fs = summarize(f);
    if (!e.empty()) {
      p.energy_error = zne::absolute_mitigation_error(e, p.exact_energy);
      p.d2E_error = zne::absolute_mitigation_error(d, p.exact_d2E);
      p.fs_error = zne::absolute_mitigation_error(f, p.exact_fs);
    }
    p.flagged = p.n_failed > 0 || !p.vqe.converged || p.overlap_gradient_norm >= kOverlapGradientLimit;
  }
  return result;
}

}  // namespace qfs::pipeline
