#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfs/autodiff/batch.hpp"
#include "qfs/autodiff/derivatives.hpp"
#include "qfs/autodiff/estimator.hpp"
#include "qfs/core/simulator.hpp"

namespace qfs::overlap {

enum class Method : std::uint8_t { compute_uncompute, hadamard_real, hadamard_imag, swap_test };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

/// `U_i` prepares the reference state and must carry no symbolic angles;
/// `U_f` is the differentiated side and owns the parameters.
struct OverlapJob {
  Circuit U_i;
  Circuit U_f;
  Method method = Method::compute_uncompute;
};

int overlap_width(Method m, int n);

/// compute_uncompute: U_i then U_f^dagger on n qubits, read the all-zeros outcome.
/// hadamard_*: ancilla (qubit 0) H, controlled U_i, controlled U_f^dagger,
///   RY(-pi/2) (real) or RX(pi/2) (imag), read Z on the ancilla.
/// swap_test: ancilla H, U_i on qubits 1..n, U_f on qubits n+1..2n, a
///   controlled swap per qubit pair, ancilla H, read Z on the ancilla.
/// Controlled operations are compiled to one- and two-qubit gates.
Circuit build_overlap_circuit(const OverlapJob& job);

/// Controlled version of `u` (RY, RZ, X and CNOT only) with `u` qubit q placed
/// on `map[q]`. RY/RZ use two half-angle rotations and two CNOTs; CNOT becomes
/// a six-CNOT Toffoli network.
Circuit controlled(const Circuit& u, int control, std::span<const int> map, int width);

/// Toffoli with controls a, b and target t.
void append_toffoli(Circuit& c, int a, int b, int t);
/// Controlled swap of a and b, controlled on c.
void append_cswap(Circuit& c, int control, int a, int b);

/// Measurement expansion matching build_overlap_circuit.
transform::Expand readout(Method m, int width);

/// Factor f in S = |f * sum_ij B_ij x_i x_j| for the Hessian B of this
/// method's readout: 1/2 for squared-overlap readouts, 1 for amplitude readouts.
double susceptibility_factor(Method m);

struct OverlapEstimate {
  Estimate estimate;
  /// Swap-test estimate below zero; reported unclipped.
  bool negative = false;
};

/// |<psi_f|psi_i>|^2 for compute_uncompute and swap_test, Re or Im of
/// <psi_f|psi_i> for the Hadamard tests.
OverlapEstimate estimate_overlap(const OverlapJob& job, std::span<const double> params, Estimator& estimator);

HessianResult overlap_hessian(const OverlapJob& job, std::span<const double> params, Estimator& estimator,
                              const transform::Fold* fold = nullptr);
GradientResult overlap_gradient(const OverlapJob& job, std::span<const double> params, Estimator& estimator);

struct ReportConfig {
  int L = 4;
  std::vector<double> r_values;
  std::vector<Method> methods{Method::compute_uncompute, Method::hadamard_real, Method::swap_test};
  std::vector<NoiseModel> noise_levels;
  std::uint64_t shots = 8192;
  int trials = 20;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct ReportRow {
  double r = 0.0;
  std::string method;
  double p1 = 0.0;
  double p2 = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double exact = 0.0;
  double mean_abs_dev = 0.0;
  double dev_of_mean = 0.0;
  std::size_t two_qubit_gates = 0;
  int n_trials = 0;
  bool placeholder = false;
};

/// Fidelity susceptibility per (r, noise level, method) from shared noisy
/// responses, with deviations from the spectral oracle. Methods that are not
/// implemented here appear as placeholder rows.
std::vector<ReportRow> noise_sensitivity_report(const ReportConfig& config);

}  // namespace qfs::overlap
