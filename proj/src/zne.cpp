#include "qfs/zne.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace qfs::zne {

namespace {

void check_lambda(int lambda) {
  if (lambda < 1 || lambda % 2 == 0) {
    throw std::invalid_argument("scale factor must be an odd integer >= 1, got " + std::to_string(lambda));
  }
}

}  // namespace

std::string_view to_string(FoldMethod m) { return m == FoldMethod::unitary ? "unitary" : "cnot"; }

FoldMethod parse_fold_method(std::string_view s) {
  if (s == "unitary") return FoldMethod::unitary;
  if (s == "cnot") return FoldMethod::cnot;
  throw std::invalid_argument("unknown folding method '" + std::string(s) + "'");
}

std::vector<double> richardson_coefficients(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("at least one scale factor is required");
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (x[i] == x[j]) throw std::invalid_argument("duplicate scale factor");
    }
  }
  std::vector<double> gamma(x.size(), 1.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t m = 0; m < x.size(); ++m) {
      if (m != j) gamma[j] *= -x[m] / (x[j] - x[m]);
    }
  }
  return gamma;
}

Circuit fold_unitary(const Circuit& circuit, int lambda) {
  check_lambda(lambda);
  Circuit out = circuit;
  const Circuit inv = circuit.dagger();
  for (int k = 0; k < (lambda - 1) / 2; ++k) {
    out.append(inv);
    out.append(circuit);
  }
  return out;
}

Circuit fold_cnot(const Circuit& circuit, int lambda) {
  check_lambda(lambda);
  Circuit out(circuit.width(), circuit.n_params());
  for (const auto& g : circuit.gates()) {
    out.add(g);
    if (g.kind != GateKind::CNOT) continue;
    for (int k = 0; k < lambda - 1; ++k) out.add(g);
  }
  return out;
}

Circuit fold(const Circuit& circuit, int lambda, FoldMethod method) {
  return method == FoldMethod::unitary ? fold_unitary(circuit, lambda) : fold_cnot(circuit, lambda);
}

MitigationPlan MitigationPlan::make(std::vector<int> scale_factors, FoldMethod folding,
                                    std::uint64_t shots_per_scale) {
  if (scale_factors.empty() || scale_factors.front() != 1) {
    throw std::invalid_argument("scale factors must start at 1");
  }
  for (std::size_t i = 0; i < scale_factors.size(); ++i) {
    check_lambda(scale_factors[i]);
    if (i > 0 && scale_factors[i] <= scale_factors[i - 1]) {
      throw std::invalid_argument("scale factors must be strictly increasing");
    }
  }
  if (shots_per_scale == 0) throw std::invalid_argument("shots per scale must be >= 1");
  const std::vector<double> x(scale_factors.begin(), scale_factors.end());
  MitigationPlan p{std::move(scale_factors), folding, shots_per_scale, richardson_coefficients(x)};
  return p;
}

MitigationPlan MitigationPlan::with_points(int n, FoldMethod folding, std::uint64_t shots_per_scale) {
  if (n < 0) throw std::invalid_argument("plan order must be >= 0");
  std::vector<int> scales;
  for (int j = 0; j <= n; ++j) scales.push_back(2 * j + 1);
  return make(std::move(scales), folding, shots_per_scale);
}

double MitigationPlan::gamma_sq_sum() const {
  double s = 0.0;
  for (double g : gamma) s += g * g;
  return s;
}

MitigatedEstimate mitigate(const MitigationPlan& plan, std::span<const Estimate> per_scale) {
  if (per_scale.size() != plan.size()) {
    throw std::invalid_argument("expected one estimate per scale factor");
  }
  MitigatedEstimate m;
  m.components.assign(per_scale.begin(), per_scale.end());
  for (std::size_t j = 0; j < plan.size(); ++j) {
    m.value += plan.gamma[j] * per_scale[j].value;
    m.variance += plan.gamma[j] * plan.gamma[j] * per_scale[j].variance;
  }
  return m;
}

MitigatedEstimator::MitigatedEstimator(MitigationPlan plan, std::unique_ptr<Estimator> base)
    : plan_(std::move(plan)), base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("mitigated estimator needs a base estimator");
}

std::vector<Estimate> MitigatedEstimator::evaluate(std::span<const Job> jobs) {
  std::map<std::pair<const Circuit*, int>, std::shared_ptr<const Circuit>> folded;
  std::vector<Job> expanded;
  expanded.reserve(jobs.size() * plan_.size());
  for (const auto& job : jobs) {
    for (int lambda : plan_.scale_factors) {
      auto& slot = folded[{job.circuit.get(), lambda}];
      if (!slot) slot = std::make_shared<const Circuit>(fold(*job.circuit, lambda, plan_.folding));
      expanded.push_back({slot, job.params, job.measurement});
    }
  }
  const auto raw = base_->evaluate(expanded);
  std::vector<Estimate> out;
  out.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto m = mitigate(plan_, std::span<const Estimate>(raw).subspan(i * plan_.size(), plan_.size()));
    std::uint64_t shots = 0;
    for (const auto& c : m.components) shots = std::max(shots, c.shots);
    out.push_back({m.value, m.variance, shots});
  }
  return out;
}

transform::Fold fold_transform(const MitigationPlan& plan) {
  const FoldMethod method = plan.folding;
  return {plan.scale_factors, plan.gamma,
          [method](const Circuit& c, int lambda) { return fold(c, lambda, method); }};
}

namespace {

CircuitBatch mitigated_batch(const Circuit& circuit, std::span<const double> params,
                             const PauliObservable& obs, const MitigationPlan& plan, DiffOrder order) {
  const Transform ts[] = {transform::Expand::observable(obs), transform::Differentiate{order},
                          fold_transform(plan)};
  return compose(circuit, params, ts);
}

}  // namespace

GradientResult mitigated_gradient(const Circuit& circuit, std::span<const double> params,
                                  const PauliObservable& obs, const MitigationPlan& plan,
                                  Estimator& estimator) {
  const auto b = mitigated_batch(circuit, params, obs, plan, DiffOrder::gradient);
  return to_gradient(b, execute(b, estimator));
}

HessianResult mitigated_hessian(const Circuit& circuit, std::span<const double> params,
                                const PauliObservable& obs, const MitigationPlan& plan,
                                Estimator& estimator) {
  const auto b = mitigated_batch(circuit, params, obs, plan, DiffOrder::hessian);
  return to_hessian(b, execute(b, estimator));
}

Estimate mitigated_expectation(const Circuit& circuit, std::span<const double> params,
                               const PauliObservable& obs, const MitigationPlan& plan,
                               Estimator& estimator) {
  const auto b = mitigated_batch(circuit, params, obs, plan, DiffOrder::none);
  return execute(b, estimator).front();
}

std::uint64_t required_shots(std::uint64_t baseline_shots, double baseline_variance,
                             std::span<const double> per_scale_variance, std::span<const double> gamma) {
  if (!(baseline_variance > 0.0)) throw std::invalid_argument("baseline variance must be positive");
  if (per_scale_variance.size() != gamma.size() || gamma.empty()) {
    throw std::invalid_argument("need one variance per Richardson coefficient");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    if (!(per_scale_variance[j] > 0.0)) throw std::invalid_argument("per-scale variances must be positive");
    s += gamma[j] * gamma[j] * per_scale_variance[j];
  }
  const double m = static_cast<double>(baseline_shots) * s / baseline_variance;
  // Absorb rounding so that exact integer products are not bumped up by one.
  return static_cast<std::uint64_t>(std::ceil(m * (1.0 - 1e-12)));
}

MitigationError absolute_mitigation_error(std::span<const double> values, double exact) {
  if (values.empty()) throw std::invalid_argument("at least one trial is required");
  double abs_sum = 0.0;
  double sum = 0.0;
  for (double v : values) {
    abs_sum += std::abs(v - exact);
    sum += v;
  }
  const double n = static_cast<double>(values.size());
  return {abs_sum / n, std::abs(sum / n - exact)};
}

}  // namespace qfs::zne
