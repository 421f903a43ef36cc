#pragma once

#include <cstdint>

#include "qfs/core/circuit.hpp"

namespace qfs::ansatz {

/// Real-amplitude RY/CNOT circuit with 2^n - 1 parameters on n in {2, 3}
/// qubits, nearest-neighbour CNOTs only. All-zero parameters give |0...0>.
///
/// 2 qubits (1 CNOT):
///   RY(t0) q0; CNOT 0->1; RY(t1) q0; RY(t2) q1
/// 3 qubits (5 CNOTs):
///   RY(t0) q2; RY(t1) q1; RY(t2) q0; CNOT 1->0; RY(t3) q1;
///   CNOT 1->2; CNOT 0->1; RY(t4) q1; RY(t5) q0; RY(t6) q2; CNOT 2->1; CNOT 1->0
Circuit build_ansatz(int n_qubits);

/// True iff every amplitude has |Im| < 1e-10 for `samples` uniformly random
/// parameter vectors in [-pi, pi). Parameter-free circuits are run once.
bool amplitudes_real_check(const Circuit& circuit, std::uint64_t seed = 0x5eed, int samples = 100);

}  // namespace qfs::ansatz
