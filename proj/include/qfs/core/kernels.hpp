#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>

// Bit-level kernels shared by the statevector and density-matrix paths. A
// density matrix on n qubits is stored as vec(rho) with index (row << n) | col,
// so gate application reuses the statevector kernels on 2n bits.
//
// `serial` is the reference implementation; `omp` must agree with it to
// rounding. Reductions in `omp` use a fixed block partition so their result
// does not depend on the thread count.

namespace qfs::kernels {

using cplx = std::complex<double>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<cplx, 4>;

namespace serial {

/// Applies `m` to bit `bit` on indices whose `control_mask` bits are all set.
void apply_1q(std::span<cplx> v, int bit, const Mat2& m, std::uint64_t control_mask = 0);
/// Exchanges bits `a` and `b` on indices whose `control_mask` bits are all set.
void apply_swap(std::span<cplx> v, int a, int b, std::uint64_t control_mask = 0);
/// Depolarizing replacement channel on the register bits in `mask` of an
/// n-qubit vec(rho): rho -> (1-p) rho + p (I/2^k) (x) Tr_mask rho.
void depolarize(std::span<cplx> rho, int n, std::uint64_t mask, double p);
/// <psi|P|psi> for the Pauli string given by masks.
cplx pauli_pure(std::span<const cplx> psi, std::uint64_t x, std::uint64_t z, int ny);
/// tr(rho P) for an n-qubit vec(rho).
cplx pauli_mixed(std::span<const cplx> rho, int n, std::uint64_t x, std::uint64_t z, int ny);
/// Probability that the bits in `mask` have even parity.
double even_parity_pure(std::span<const cplx> psi, std::uint64_t mask);
double even_parity_mixed(std::span<const cplx> rho, int n, std::uint64_t mask);

}  // namespace serial

namespace omp {

void apply_1q(std::span<cplx> v, int bit, const Mat2& m, std::uint64_t control_mask = 0);
void apply_swap(std::span<cplx> v, int a, int b, std::uint64_t control_mask = 0);
void depolarize(std::span<cplx> rho, int n, std::uint64_t mask, double p);
cplx pauli_pure(std::span<const cplx> psi, std::uint64_t x, std::uint64_t z, int ny);
cplx pauli_mixed(std::span<const cplx> rho, int n, std::uint64_t x, std::uint64_t z, int ny);
double even_parity_pure(std::span<const cplx> psi, std::uint64_t mask);
double even_parity_mixed(std::span<const cplx> rho, int n, std::uint64_t mask);

}  // namespace omp

}  // namespace qfs::kernels
