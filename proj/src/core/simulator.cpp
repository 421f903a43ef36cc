#include "qfs/core/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qfs/core/kernels.hpp"

namespace qfs {

namespace {

using kernels::Mat2;

Mat2 matrix_of(GateKind kind, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const double h = std::numbers::sqrt2 / 2;
  const cplx i{0, 1};
  switch (kind) {
    case GateKind::RY:
    case GateKind::CRY:
      return {c, -s, s, c};
    case GateKind::RX:
      return {c, -i * s, -i * s, c};
    case GateKind::RZ:
      return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
    case GateKind::H:
      return {h, h, h, -h};
    case GateKind::X:
    case GateKind::CNOT:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::S:
      return {1.0, 0.0, 0.0, i};
    case GateKind::Sdg:
      return {1.0, 0.0, 0.0, -i};
    case GateKind::T:
      return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
    case GateKind::Tdg:
      return {1.0, 0.0, 0.0, std::polar(1.0, -std::numbers::pi / 4)};
    default:
      throw std::logic_error("gate has no 2x2 matrix");
  }
}

Mat2 conj(const Mat2& m) { return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}; }

void apply_1q(Backend b, std::span<cplx> v, int bit, const Mat2& m, std::uint64_t ctrl) {
  if (b == Backend::serial) {
    kernels::serial::apply_1q(v, bit, m, ctrl);
  } else {
    kernels::omp::apply_1q(v, bit, m, ctrl);
  }
}

void apply_swap(Backend b, std::span<cplx> v, int x, int y, std::uint64_t ctrl) {
  if (b == Backend::serial) {
    kernels::serial::apply_swap(v, x, y, ctrl);
  } else {
    kernels::omp::apply_swap(v, x, y, ctrl);
  }
}

std::uint64_t qubit_mask(int n, int q) { return std::uint64_t{1} << (n - 1 - q); }

void apply_noise(QuantumState& state, const Gate& gate, const NoiseModel& noise, Backend b) {
  const int k = arity(gate.kind);
  const double p = k == 1 ? noise.p1 : noise.p2;
  if (p == 0.0) return;
  const int n = state.width();
  std::uint64_t mask = 0;
  for (int j = 0; j < k; ++j) mask |= qubit_mask(n, gate.qubits[static_cast<std::size_t>(j)]);
  if (b == Backend::serial) {
    kernels::serial::depolarize(state.data(), n, mask, p);
  } else {
    kernels::omp::depolarize(state.data(), n, mask, p);
  }
}

void check_params(const Circuit& circuit, std::span<const double> params) {
  if (params.size() != static_cast<std::size_t>(circuit.n_params())) {
    throw std::invalid_argument("expected " + std::to_string(circuit.n_params()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  if (circuit.width() > kMaxQubits) {
    throw std::invalid_argument("circuit width " + std::to_string(circuit.width()) +
                                " exceeds the simulator limit " + std::to_string(kMaxQubits));
  }
}

void check_width(int a, int b) {
  if (a != b) throw std::invalid_argument("observable width does not match circuit width");
}

}  // namespace

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("depolarizing probabilities must lie in [0, 1]");
  }
}

void apply_gate(QuantumState& state, const Gate& gate, double angle, Backend backend) {
  const int n = state.width();
  const bool pure = state.is_pure();
  // Pure: one pass on n bits. Mixed: U on the row bits (shifted by n), conj(U)
  // on the column bits.
  const int row_shift = pure ? 0 : n;
  auto bit = [&](int q) { return n - 1 - q; };
  auto data = state.data();

  auto one = [&](const Mat2& m, int target, std::uint64_t ctrl) {
    apply_1q(backend, data, bit(target) + row_shift, m, ctrl << row_shift);
    if (!pure) apply_1q(backend, data, bit(target), conj(m), ctrl);
  };
  auto swap = [&](int a, int b, std::uint64_t ctrl) {
    apply_swap(backend, data, bit(a) + row_shift, bit(b) + row_shift, ctrl << row_shift);
    if (!pure) apply_swap(backend, data, bit(a), bit(b), ctrl);
  };

  const auto& q = gate.qubits;
  switch (gate.kind) {
    case GateKind::CNOT:
    case GateKind::CRY:
      one(matrix_of(gate.kind, angle), q[1], qubit_mask(n, q[0]));
      break;
    case GateKind::SWAP:
      swap(q[0], q[1], 0);
      break;
    case GateKind::CSWAP:
      swap(q[1], q[2], qubit_mask(n, q[0]));
      break;
    default:
      one(matrix_of(gate.kind, angle), q[0], 0);
      break;
  }
}

QuantumState run(const Circuit& circuit, std::span<const double> params, const NoiseModel& noise,
                 const RunOptions& options) {
  check_params(circuit, params);
  noise.validate();
  const bool mixed = options.force_mixed || !noise.noiseless();
  auto state = QuantumState::zero(circuit.width(), mixed);
  for (const auto& gate : circuit.gates()) {
    apply_gate(state, gate, gate.angle.resolve(params), options.backend);
    if (mixed) apply_noise(state, gate, noise, options.backend);
    if (options.check_invariants) state.check_invariants();
  }
  return state;
}

double expectation(const QuantumState& state, const PauliString& p, Backend backend) {
  check_width(p.width(), state.width());
  const auto x = p.x_mask();
  const auto z = p.z_mask();
  const int ny = p.y_count();
  cplx v;
  if (state.is_pure()) {
    v = backend == Backend::serial ? kernels::serial::pauli_pure(state.data(), x, z, ny)
                                   : kernels::omp::pauli_pure(state.data(), x, z, ny);
  } else {
    v = backend == Backend::serial ? kernels::serial::pauli_mixed(state.data(), state.width(), x, z, ny)
                                   : kernels::omp::pauli_mixed(state.data(), state.width(), x, z, ny);
  }
  return v.real();
}

double expectation(const QuantumState& state, const PauliObservable& obs, Backend backend) {
  check_width(obs.width(), state.width());
  double acc = 0.0;
  for (const auto& t : obs.terms()) acc += t.coeff * expectation(state, t.string, backend);
  return acc;
}

double expectation_exact(const Circuit& circuit, std::span<const double> params,
                         const PauliObservable& obs, const NoiseModel& noise) {
  check_width(obs.width(), circuit.width());
  return expectation(run(circuit, params, noise), obs);
}

double even_parity_probability(const QuantumState& state, const PauliString& p, Backend backend) {
  check_width(p.width(), state.width());
  QuantumState rotated = state;
  for (int q = 0; q < p.width(); ++q) {
    const Gate h{GateKind::H, {q, 0, 0}, {}};
    if (p.at(q) == 'X') {
      apply_gate(rotated, h, 0.0, backend);
    } else if (p.at(q) == 'Y') {
      apply_gate(rotated, {GateKind::Sdg, {q, 0, 0}, {}}, 0.0, backend);
      apply_gate(rotated, h, 0.0, backend);
    }
  }
  const auto mask = p.support_mask();
  const double pe = rotated.is_pure()
                        ? (backend == Backend::serial ? kernels::serial::even_parity_pure(rotated.data(), mask)
                                                      : kernels::omp::even_parity_pure(rotated.data(), mask))
                        : (backend == Backend::serial
                               ? kernels::serial::even_parity_mixed(rotated.data(), rotated.width(), mask)
                               : kernels::omp::even_parity_mixed(rotated.data(), rotated.width(), mask));
  return std::clamp(pe, 0.0, 1.0);
}

Estimate sample_pauli(const QuantumState& state, const PauliString& p, std::uint64_t shots,
                      std::mt19937_64& rng) {
  if (shots == 0) throw std::invalid_argument("sampling requires at least one shot");
  const double pe = even_parity_probability(state, p);
  std::binomial_distribution<std::uint64_t> draw(shots, pe);
  const auto k = draw(rng);
  const double n = static_cast<double>(shots);
  const double value = 2.0 * static_cast<double>(k) / n - 1.0;
  return {value, (1.0 - value * value) / n, shots};
}

Estimate sample_all_zeros(const QuantumState& state, std::uint64_t shots, std::mt19937_64& rng) {
  const double p0 = std::clamp(state.probability(0), 0.0, 1.0);
  if (shots == 0) return {p0, 0.0, 0};
  std::binomial_distribution<std::uint64_t> draw(shots, p0);
  const double n = static_cast<double>(shots);
  const double value = static_cast<double>(draw(rng)) / n;
  return {value, value * (1.0 - value) / n, shots};
}

Estimate expectation_sampled(const Circuit& circuit, std::span<const double> params,
                             const PauliObservable& obs, const NoiseModel& noise,
                             std::uint64_t shots, std::uint64_t seed) {
  check_width(obs.width(), circuit.width());
  if (shots == 0) throw std::invalid_argument("sampling requires at least one shot");
  const auto state = run(circuit, params, noise);
  std::mt19937_64 rng(seed);
  Estimate total{0.0, 0.0, shots};
  for (const auto& t : obs.terms()) {
    const auto e = sample_pauli(state, t.string, shots, rng);
    total.value += t.coeff * e.value;
    total.variance += t.coeff * t.coeff * e.variance;
  }
  return total;
}

Estimate probability_all_zeros(const Circuit& circuit, std::span<const double> params,
                               const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed) {
  const auto state = run(circuit, params, noise);
  std::mt19937_64 rng(seed);
  return sample_all_zeros(state, shots, rng);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(master);
  for (auto p : path) s = mix(s ^ mix(p + 0x632be59bd9b4e019ULL));
  return s;
}

}  // namespace qfs
