#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "qfs/autodiff/batch.hpp"

namespace qfs {

struct GradientResult {
  std::vector<double> values;
  std::vector<double> variances;
};

/// Symmetric by construction: each off-diagonal entry is computed once.
struct HessianResult {
  Eigen::MatrixXd values;
  Eigen::MatrixXd variances;
};

GradientResult to_gradient(const CircuitBatch& batch, std::span<const Estimate> outputs);
HessianResult to_hessian(const CircuitBatch& batch, std::span<const Estimate> outputs);

/// Observables are taken with their stored coefficients; use
/// PauliObservable::at or ::part to select H(r) or H1.
GradientResult grad_expectation(const Circuit& circuit, std::span<const double> params,
                                const PauliObservable& obs, Estimator& estimator);
HessianResult hessian_expectation(const Circuit& circuit, std::span<const double> params,
                                  const PauliObservable& obs, Estimator& estimator);
/// Derivatives of the all-zeros probability.
GradientResult grad_probability(const Circuit& circuit, std::span<const double> params,
                                Estimator& estimator);
HessianResult hessian_probability(const Circuit& circuit, std::span<const double> params,
                                  Estimator& estimator);

/// Distinct circuits needed per measurement term: 2n for the gradient and
/// n + 1 + 4 * n(n-1)/2 for the Hessian when every parameter occurs once.
std::size_t shift_circuit_count(int n_params, DiffOrder order);

}  // namespace qfs
