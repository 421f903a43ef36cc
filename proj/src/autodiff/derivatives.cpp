#include "qfs/autodiff/derivatives.hpp"

#include <stdexcept>

namespace qfs {

namespace {

CircuitBatch plan(const Circuit& circuit, std::span<const double> params, transform::Expand expand,
                  DiffOrder order) {
  const Transform ts[] = {std::move(expand), transform::Differentiate{order}};
  return compose(circuit, params, ts);
}

}  // namespace

GradientResult to_gradient(const CircuitBatch& batch, std::span<const Estimate> outputs) {
  if (batch.order != DiffOrder::gradient || outputs.size() != static_cast<std::size_t>(batch.n_params)) {
    throw std::invalid_argument("batch does not hold a gradient");
  }
  GradientResult g;
  for (const auto& e : outputs) {
    g.values.push_back(e.value);
    g.variances.push_back(e.variance);
  }
  return g;
}

HessianResult to_hessian(const CircuitBatch& batch, std::span<const Estimate> outputs) {
  const int n = batch.n_params;
  if (batch.order != DiffOrder::hessian || outputs.size() != static_cast<std::size_t>(n * (n + 1) / 2)) {
    throw std::invalid_argument("batch does not hold a Hessian");
  }
  HessianResult h{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const auto& e = outputs[hessian_index(n, i, j)];
      h.values(i, j) = h.values(j, i) = e.value;
      h.variances(i, j) = h.variances(j, i) = e.variance;
    }
  }
  return h;
}

GradientResult grad_expectation(const Circuit& circuit, std::span<const double> params,
                                const PauliObservable& obs, Estimator& estimator) {
  const auto b = plan(circuit, params, transform::Expand::observable(obs), DiffOrder::gradient);
  return to_gradient(b, execute(b, estimator));
}

HessianResult hessian_expectation(const Circuit& circuit, std::span<const double> params,
                                  const PauliObservable& obs, Estimator& estimator) {
  const auto b = plan(circuit, params, transform::Expand::observable(obs), DiffOrder::hessian);
  return to_hessian(b, execute(b, estimator));
}

GradientResult grad_probability(const Circuit& circuit, std::span<const double> params,
                                Estimator& estimator) {
  const auto b = plan(circuit, params, transform::Expand::all_zeros(), DiffOrder::gradient);
  return to_gradient(b, execute(b, estimator));
}

HessianResult hessian_probability(const Circuit& circuit, std::span<const double> params,
                                  Estimator& estimator) {
  const auto b = plan(circuit, params, transform::Expand::all_zeros(), DiffOrder::hessian);
  return to_hessian(b, execute(b, estimator));
}

std::size_t shift_circuit_count(int n_params, DiffOrder order) {
  const auto n = static_cast<std::size_t>(n_params);
  switch (order) {
    case DiffOrder::none: return 1;
    case DiffOrder::gradient: return 2 * n;
    case DiffOrder::hessian: return n + 1 + 2 * n * (n - 1);
  }
  return 0;
}

}  // namespace qfs
