#include "qfs/autodiff/estimator.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace qfs {

Estimate Estimator::evaluate_one(const Job& job) { return evaluate(std::span<const Job>(&job, 1)).front(); }

SimulatingEstimator::SimulatingEstimator(NoiseModel noise, Backend backend)
    : noise_(noise), backend_(backend) {
  noise_.validate();
}

std::vector<Estimate> SimulatingEstimator::evaluate(std::span<const Job> jobs) {
  std::map<std::pair<const Circuit*, std::vector<double>>, QuantumState> states;
  std::vector<Estimate> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) {
    if (!job.circuit) throw std::invalid_argument("job has no circuit");
    if (job.measurement.pauli && job.measurement.pauli->width() != job.circuit->width()) {
      throw std::invalid_argument("measurement width does not match circuit width");
    }
    auto key = std::make_pair(job.circuit.get(), job.params);
    auto it = states.find(key);
    if (it == states.end()) {
      RunOptions opts;
      opts.backend = backend_;
      it = states.emplace(std::move(key), run(*job.circuit, job.params, noise_, opts)).first;
    }
    out.push_back(measure(it->second, job.measurement));
  }
  return out;
}

Estimate ExactEstimator::measure(const QuantumState& state, const Measurement& m) {
  if (m.is_all_zeros()) return {state.probability(0), 0.0, 0};
  return {expectation(state, *m.pauli, backend()), 0.0, 0};
}

SampledEstimator::SampledEstimator(std::uint64_t shots, NoiseModel noise, std::uint64_t seed,
                                   Backend backend)
    : SimulatingEstimator(noise, backend), shots_(shots), rng_(seed) {
  if (shots == 0) throw std::invalid_argument("sampled estimator requires at least one shot");
}

Estimate SampledEstimator::measure(const QuantumState& state, const Measurement& m) {
  if (m.is_all_zeros()) return sample_all_zeros(state, shots_, rng_);
  return sample_pauli(state, *m.pauli, shots_, rng_);
}

}  // namespace qfs
