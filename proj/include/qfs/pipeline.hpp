#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfs/autodiff/derivatives.hpp"
#include "qfs/core/circuit.hpp"
#include "qfs/core/pauli.hpp"
#include "qfs/core/simulator.hpp"
#include "qfs/overlap.hpp"
#include "qfs/tfim.hpp"
#include "qfs/zne.hpp"

namespace qfs::pipeline {

/// Reduced Hamiltonian, its qubit observable and the matching ansatz for one L.
struct Problem {
  int L = 0;
  tfim::ReducedHamiltonian reduced;
  PauliObservable observable;
  Circuit ansatz;

  static Problem make(int L);
  [[nodiscard]] PauliObservable H(double r) const { return observable.at(r); }
  [[nodiscard]] PauliObservable H1() const { return observable.part(Partition::H1); }
  [[nodiscard]] int n_params() const { return ansatz.n_params(); }
};

struct VqeOptions {
  double step = 0.1;
  int max_iterations = 1000;
  /// Stop once |E - exact| falls below this (requires an exact reference).
  double energy_tolerance = 1e-8;
  /// Without a reference: stop once the gradient max-norm falls below this.
  double gradient_tolerance = 1e-10;
  /// When > 0, keep descending after the energy criterion until the gradient
  /// max-norm is below this value (bounded by max_iterations in total).
  double polish_gradient = 0.0;
};

struct VqeResult {
  std::vector<double> theta_opt;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Gradient descent from theta = 0 with exact parameter-shift gradients.
VqeResult vqe(const PauliObservable& obs, const Circuit& ansatz, double r, std::optional<double> exact_E0,
              const VqeOptions& options = {});

struct ResponseSolution {
  std::vector<double> dtheta_dr;
  double condition_number = 1.0;
  /// max |Hess * x + grad|
  double residual_norm = 0.0;
  /// Some singular values fell below 1e-8 * sigma_max and were dropped.
  bool truncated = false;
  int rank = 0;
};

inline constexpr double kPinvCutoff = 1e-8;

/// Solves Hess * x = -grad by truncated SVD.
ResponseSolution solve_response(const HessianResult& hess, const GradientResult& grad_h1);

/// sum_i grad_i * x_i
double second_energy_derivative(const GradientResult& grad_h1, const ResponseSolution& response);

/// |factor * sum_ij B_ij x_i x_j|; factor 1/2 when B is the Hessian of the
/// squared overlap.
double fidelity_susceptibility(const HessianResult& overlap_hessian, const ResponseSolution& response,
                               double factor = 0.5);

/// First-order (delta-method) variances treating every Hessian and gradient
/// entry as independent.
double second_energy_derivative_variance(const HessianResult& hess, const GradientResult& grad_h1,
                                         const ResponseSolution& response);
double fidelity_susceptibility_variance(const HessianResult& hess, const GradientResult& grad_h1,
                                        const HessianResult& overlap_hessian, const ResponseSolution& response,
                                        double factor = 0.5);

struct CellOptions {
  std::optional<zne::MitigationPlan> plan;
  overlap::Method method = overlap::Method::compute_uncompute;
  bool estimate_energy = true;
};

/// One evaluation of all quantities at fixed r and theta with one estimator.
struct CellResult {
  Estimate energy;
  Estimate d2E;
  Estimate fs;
  double condition_number = 0.0;
  double residual_norm = 0.0;
  bool truncated = false;
  std::vector<double> dtheta_dr;
};

/// Hessian of <H(r)>, gradient of <H1> and Hessian of the overlap readout at
/// theta, in that order, all from `estimator` (folded when a plan is given).
CellResult compute_cell(const Problem& problem, double r, std::span<const double> theta, Estimator& estimator,
                        const CellOptions& options = {});

/// Response from precomputed derivatives, then the susceptibility for one
/// overlap method from `estimator`.
Estimate susceptibility_for_method(const Problem& problem, std::span<const double> theta,
                                   const ResponseSolution& response, overlap::Method method,
                                   Estimator& estimator, const transform::Fold* fold = nullptr);

struct PointResult {
  double r = 0.0;
  Estimate energy;
  Estimate d2E;
  Estimate fs;
  double energy_per_site = 0.0;
  double d2E_per_site = 0.0;
  double fs_per_site = 0.0;
  double condition_number = 0.0;
};

/// Exact-estimator evaluation at the VQE optimum.
PointResult compute_point(const Problem& problem, double r, std::span<const double> theta);

/// Exact overlap-gradient max-norm at the working point; the susceptibility
/// formula assumes it vanishes.
double overlap_gradient_norm(const Problem& problem, std::span<const double> theta);
inline constexpr double kOverlapGradientLimit = 1e-3;

enum class EstimatorKind : std::uint8_t { exact, sampled, noisy, mitigated };
std::string_view to_string(EstimatorKind k);
EstimatorKind parse_estimator(std::string_view s);

struct SweepConfig {
  int L = 4;
  std::vector<double> r_values;
  EstimatorKind estimator = EstimatorKind::sampled;
  std::uint64_t shots = 8192;
  int trials = 20;
  NoiseModel noise = NoiseModel::device_default();
  zne::MitigationPlan plan = zne::MitigationPlan::with_points(0);
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Noise model actually used for the estimator kind (zero for exact/sampled).
NoiseModel effective_noise(const SweepConfig& config);

/// Grid start, start+step, ... up to stop (inclusive within half a step).
std::vector<double> r_grid(double start, double stop, double step);

struct TrialRecord {
  int r_index = 0;
  double r = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  CellResult cell;
  bool failed = false;
  std::string error;
};

struct Stats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for one trial
  int n = 0;
};

Stats summarize(std::span<const double> values);

struct SweepPoint {
  double r = 0.0;
  VqeResult vqe;
  double exact_energy = 0.0;
  double exact_d2E = 0.0;
  double exact_fs = 0.0;
  Stats energy;
  Stats d2E;
  Stats fs;
  double condition_number_max = 0.0;
  double overlap_gradient_norm = 0.0;
  int n_failed = 0;
  int n_truncated = 0;
  bool flagged = false;  // failed cells, VQE not converged, or overlap-gradient check
  zne::MitigationError energy_error;
  zne::MitigationError d2E_error;
  zne::MitigationError fs_error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<TrialRecord> trials;  // sorted by (r_index, trial)
};

/// Per-r VQE, then (r, trial) cells with seeds derive_seed(seed, {r_index, trial}),
/// run on up to `jobs` threads. Output does not depend on `jobs`.
SweepResult sweep(const SweepConfig& config);

/// Per-r VQE (exact estimator) with the oracle ground energy as reference.
std::vector<VqeResult> solve_vqe_grid(const Problem& problem, std::span<const double> r_values, int jobs = 1);

}  // namespace qfs::pipeline
