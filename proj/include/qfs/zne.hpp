#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qfs/autodiff/batch.hpp"
#include "qfs/autodiff/derivatives.hpp"
#include "qfs/autodiff/estimator.hpp"

namespace qfs::zne {

enum class FoldMethod : std::uint8_t { unitary, cnot };

std::string_view to_string(FoldMethod m);
FoldMethod parse_fold_method(std::string_view s);

/// Lagrange weights for extrapolating to x = 0:
/// gamma_j = prod_{m != j} (-x_m) / (x_j - x_m).
std::vector<double> richardson_coefficients(std::span<const double> scale_factors);

/// (U U^dagger)^((lambda-1)/2) U.
Circuit fold_unitary(const Circuit& circuit, int lambda);
/// Every CNOT followed by (lambda-1)/2 CNOT pairs on the same qubits.
Circuit fold_cnot(const Circuit& circuit, int lambda);
Circuit fold(const Circuit& circuit, int lambda, FoldMethod method);

inline constexpr std::uint64_t kDefaultShotsPerScale = 8192;

struct MitigationPlan {
  std::vector<int> scale_factors;
  FoldMethod folding = FoldMethod::unitary;
  std::uint64_t shots_per_scale = kDefaultShotsPerScale;
  std::vector<double> gamma;

  /// Validates the scales (odd, strictly increasing, starting at 1) and fills gamma.
  static MitigationPlan make(std::vector<int> scale_factors, FoldMethod folding = FoldMethod::unitary,
                             std::uint64_t shots_per_scale = kDefaultShotsPerScale);
  /// Scales 1, 3, ..., 2n+1.
  static MitigationPlan with_points(int n, FoldMethod folding = FoldMethod::unitary,
                                    std::uint64_t shots_per_scale = kDefaultShotsPerScale);

  [[nodiscard]] std::size_t size() const { return scale_factors.size(); }
  [[nodiscard]] double gamma_sq_sum() const;
};

struct MitigatedEstimate {
  double value = 0.0;
  double variance = 0.0;
  std::vector<Estimate> components;
};

/// Sum of gamma_j E_j and of gamma_j^2 sigma_j^2, ascending j.
MitigatedEstimate mitigate(const MitigationPlan& plan, std::span<const Estimate> per_scale);

/// Runs each job at every scale factor through `base` and mitigates per job.
class MitigatedEstimator final : public Estimator {
 public:
  MitigatedEstimator(MitigationPlan plan, std::unique_ptr<Estimator> base);
  std::vector<Estimate> evaluate(std::span<const Job> jobs) override;
  [[nodiscard]] const MitigationPlan& plan() const { return plan_; }

 private:
  MitigationPlan plan_;
  std::unique_ptr<Estimator> base_;
};

/// Folding stage for compose().
transform::Fold fold_transform(const MitigationPlan& plan);

/// Expansion, differentiation and folding composed into one batch; every
/// shifted circuit of every term is mitigated separately.
GradientResult mitigated_gradient(const Circuit& circuit, std::span<const double> params,
                                  const PauliObservable& obs, const MitigationPlan& plan,
                                  Estimator& estimator);
HessianResult mitigated_hessian(const Circuit& circuit, std::span<const double> params,
                                const PauliObservable& obs, const MitigationPlan& plan,
                                Estimator& estimator);
Estimate mitigated_expectation(const Circuit& circuit, std::span<const double> params,
                               const PauliObservable& obs, const MitigationPlan& plan,
                               Estimator& estimator);

/// Smallest M with M >= (N / sigma^2) * sum_j gamma_j^2 sigma_j^2.
std::uint64_t required_shots(std::uint64_t baseline_shots, double baseline_variance,
                             std::span<const double> per_scale_variance, std::span<const double> gamma);

struct MitigationError {
  double per_trial_mean = 0.0;  // mean_t |v_t - exact|
  double of_mean = 0.0;         // |mean_t v_t - exact|
};

MitigationError absolute_mitigation_error(std::span<const double> values, double exact);

}  // namespace qfs::zne
