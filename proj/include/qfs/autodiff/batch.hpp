#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "qfs/autodiff/estimator.hpp"

namespace qfs {

/// Offset added to the angle of one gate of the unfolded circuit.
struct GateShift {
  std::size_t gate = 0;
  double delta = 0.0;

  friend auto operator<=>(const GateShift&, const GateShift&) = default;
};

enum class DiffOrder : std::uint8_t { none, gradient, hessian };

namespace transform {

/// Splits the measured quantity into weighted single measurements.
struct Expand {
  std::vector<double> coeffs;
  std::vector<Measurement> measurements;

  /// One measurement per term, coefficients as stored (partitions ignored).
  static Expand observable(const PauliObservable& obs);
  static Expand all_zeros();
};

/// Parameter-shift gradient or Hessian over every circuit parameter.
///
/// A parameter occurring in several gates is differentiated occurrence by
/// occurrence and combined with the chain rule; each occurrence uses the
/// two-term rule in its own gate angle (shifts +-pi/2, and +pi for the second
/// derivative with the unshifted value shared).
struct Differentiate {
  DiffOrder order = DiffOrder::gradient;
};

/// Evaluates every circuit at each scale factor and combines with `gamma`.
struct Fold {
  std::vector<int> scale_factors;
  std::vector<double> gamma;
  std::function<Circuit(const Circuit&, int)> folder;
};

}  // namespace transform

using Transform = std::variant<transform::Expand, transform::Differentiate, transform::Fold>;

/// Identity of one concrete execution: measurement term, shifts applied to the
/// unfolded circuit, and fold scale. Sorting keys fixes the summation order.
struct JobKey {
  int term = 0;
  std::vector<GateShift> shifts;
  int scale = 1;

  friend auto operator<=>(const JobKey&, const JobKey&) = default;
};

/// Flat list of executions plus a linear recombination per output.
///
/// Outputs: one value (DiffOrder::none), n gradient entries, or the upper
/// triangle of the Hessian in row-major order (see hessian_index).
struct CircuitBatch {
  int n_params = 0;
  DiffOrder order = DiffOrder::none;
  std::vector<Job> jobs;
  std::vector<JobKey> keys;  // parallel to jobs, strictly increasing
  std::vector<std::vector<std::pair<std::size_t, double>>> outputs;

  /// Distinct circuits, i.e. jobs counted once across measurement terms.
  [[nodiscard]] std::size_t circuit_count() const;
  /// Sum of coeff * value in stored order; variance sum of coeff^2 * variance.
  [[nodiscard]] std::vector<Estimate> recombine(std::span<const Estimate> results) const;
};

[[nodiscard]] std::size_t hessian_index(int n, int i, int j);

/// Applies the transforms to `circuit` at `params`. Expansion must come first;
/// differentiation and folding follow in either order, each at most once.
/// Both orders produce the same jobs and the same recombination.
CircuitBatch compose(const Circuit& circuit, std::span<const double> params,
                     std::span<const Transform> transforms);

/// Executes all jobs in one estimator call and recombines.
std::vector<Estimate> execute(const CircuitBatch& batch, Estimator& estimator);

}  // namespace qfs
