#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

#include "qfs/core/circuit.hpp"
#include "qfs/core/pauli.hpp"
#include "qfs/core/state.hpp"

namespace qfs {

/// Depolarizing probabilities applied after every single-qubit gate (p1) and
/// every multi-qubit gate (p2, on all qubits the gate touches).
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;

  static constexpr NoiseModel device_default() { return {2e-4, 8e-3}; }
  [[nodiscard]] bool noiseless() const { return p1 == 0.0 && p2 == 0.0; }
  void validate() const;

  friend constexpr bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// A measured expectation; `shots == 0` marks an exact value with zero variance.
struct Estimate {
  double value = 0.0;
  double variance = 0.0;
  std::uint64_t shots = 0;

  friend constexpr bool operator==(const Estimate&, const Estimate&) = default;
};

enum class Backend : std::uint8_t { serial, omp };

struct RunOptions {
  Backend backend = Backend::omp;
  bool check_invariants = false;
  /// Use the density-matrix path even without noise.
  bool force_mixed = false;
};

/// Applies one gate at the given angle; noise is not applied.
void apply_gate(QuantumState& state, const Gate& gate, double angle, Backend backend = Backend::omp);

/// Evolves |0...0> through the circuit. Pure when the noise model is zero.
QuantumState run(const Circuit& circuit, std::span<const double> params, const NoiseModel& noise = {},
                 const RunOptions& options = {});

double expectation(const QuantumState& state, const PauliString& p, Backend backend = Backend::omp);
/// Sum of coeff * <P> over all terms as stored; partitions are not scaled.
double expectation(const QuantumState& state, const PauliObservable& obs,
                   Backend backend = Backend::omp);

double expectation_exact(const Circuit& circuit, std::span<const double> params,
                         const PauliObservable& obs, const NoiseModel& noise = {});

/// Probability of even parity on the support of `p` after rotating each
/// support qubit into the eigenbasis of its letter (X via H, Y via Sdg then H).
double even_parity_probability(const QuantumState& state, const PauliString& p,
                               Backend backend = Backend::omp);

/// Binomial readout of one Pauli term: value 2k/shots - 1, variance
/// (1 - value^2) / shots.
Estimate sample_pauli(const QuantumState& state, const PauliString& p, std::uint64_t shots,
                      std::mt19937_64& rng);
/// Binomial readout of the all-zeros outcome: value k/shots, variance
/// value (1 - value) / shots. `shots == 0` returns the exact probability.
Estimate sample_all_zeros(const QuantumState& state, std::uint64_t shots, std::mt19937_64& rng);

/// Each term is sampled independently with `shots` shots from one generator
/// seeded by `seed`, in term order.
Estimate expectation_sampled(const Circuit& circuit, std::span<const double> params,
                             const PauliObservable& obs, const NoiseModel& noise,
                             std::uint64_t shots, std::uint64_t seed);

Estimate probability_all_zeros(const Circuit& circuit, std::span<const double> params,
                               const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed);

/// Child seed for a position in a seed tree, by repeated splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace qfs
