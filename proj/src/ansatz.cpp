#include "qfs/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "qfs/core/simulator.hpp"

namespace qfs::ansatz {

Circuit build_ansatz(int n_qubits) {
  auto p = [](int i) { return Angle::symbol(i); };
  if (n_qubits == 2) {
    Circuit c(2, 3);
    c.ry(0, p(0)).cnot(0, 1).ry(0, p(1)).ry(1, p(2));
    return c;
  }
  if (n_qubits == 3) {
    Circuit c(3, 7);
    c.ry(2, p(0)).ry(1, p(1)).ry(0, p(2));
    c.cnot(1, 0).ry(1, p(3));
    c.cnot(1, 2).cnot(0, 1);
    c.ry(1, p(4)).ry(0, p(5)).ry(2, p(6));
    c.cnot(2, 1).cnot(1, 0);
    return c;
  }
  throw std::invalid_argument("ansatz is defined for 2 or 3 qubits, got " + std::to_string(n_qubits));
}

bool amplitudes_real_check(const Circuit& circuit, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const int runs = circuit.n_params() == 0 ? 1 : samples;
  std::vector<double> params(static_cast<std::size_t>(circuit.n_params()));
  for (int s = 0; s < runs; ++s) {
    for (auto& t : params) t = angle(rng);
    const auto state = run(circuit, params);
    for (const auto& a : state.data()) {
      if (std::abs(a.imag()) >= 1e-10) return false;
    }
  }
  return true;
}

}  // namespace qfs::ansatz
