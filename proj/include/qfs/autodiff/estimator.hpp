#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qfs/core/circuit.hpp"
#include "qfs/core/pauli.hpp"
#include "qfs/core/simulator.hpp"

namespace qfs {

/// What is read out from a circuit: one Pauli term, or the all-zeros outcome.
struct Measurement {
  std::optional<PauliString> pauli;

  static Measurement of(PauliString p) { return {std::move(p)}; }
  static Measurement all_zeros() { return {}; }
  [[nodiscard]] bool is_all_zeros() const { return !pauli.has_value(); }

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct Job {
  std::shared_ptr<const Circuit> circuit;
  std::vector<double> params;
  Measurement measurement;
};

/// Execution strategy for a list of jobs. Jobs sharing a circuit object and
/// parameter vector are simulated once per call.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual std::vector<Estimate> evaluate(std::span<const Job> jobs) = 0;
  /// Single-job convenience wrapper.
  Estimate evaluate_one(const Job& job);
};

class SimulatingEstimator : public Estimator {
 public:
  explicit SimulatingEstimator(NoiseModel noise, Backend backend = Backend::omp);
  std::vector<Estimate> evaluate(std::span<const Job> jobs) final;
  [[nodiscard]] const NoiseModel& noise() const { return noise_; }

 protected:
  virtual Estimate measure(const QuantumState& state, const Measurement& m) = 0;
  [[nodiscard]] Backend backend() const { return backend_; }

 private:
  NoiseModel noise_;
  Backend backend_;
};

/// Exact expectation values (variance 0, shots 0).
class ExactEstimator final : public SimulatingEstimator {
 public:
  explicit ExactEstimator(NoiseModel noise = {}, Backend backend = Backend::omp)
      : SimulatingEstimator(noise, backend) {}

 protected:
  Estimate measure(const QuantumState& state, const Measurement& m) override;
};

/// Binomial shot sampling, one independent draw per job, consumed from a
/// single generator in job order.
class SampledEstimator final : public SimulatingEstimator {
 public:
  SampledEstimator(std::uint64_t shots, NoiseModel noise, std::uint64_t seed,
                   Backend backend = Backend::omp);
  [[nodiscard]] std::uint64_t shots() const { return shots_; }

 protected:
  Estimate measure(const QuantumState& state, const Measurement& m) override;

 private:
  std::uint64_t shots_;
  std::mt19937_64 rng_;
};

}  // namespace qfs
