#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qfs {

using cplx = std::complex<double>;

/// Pure amplitude vector or density matrix stored as vec(rho), row-major
/// (index = row * 2^n + col). Basis index bit (n-1-q) holds qubit q.
class QuantumState {
 public:
  static QuantumState zero(int width, bool mixed = false);
  static QuantumState from_amplitudes(std::vector<cplx> psi);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] bool is_pure() const { return pure_; }
  [[nodiscard]] std::uint64_t dim() const { return std::uint64_t{1} << width_; }

  [[nodiscard]] std::span<const cplx> data() const { return data_; }
  [[nodiscard]] std::span<cplx> data() { return data_; }

  /// Amplitude of basis state `i`; pure states only.
  [[nodiscard]] cplx amplitude(std::uint64_t i) const;
  /// rho[row, col]; defined for both representations.
  [[nodiscard]] cplx density(std::uint64_t row, std::uint64_t col) const;
  [[nodiscard]] double probability(std::uint64_t i) const { return density(i, i).real(); }

  /// Pure: squared norm. Mixed: real part of the trace.
  [[nodiscard]] double norm() const;
  [[nodiscard]] QuantumState to_mixed() const;

  /// Throws std::runtime_error when normalization (pure) or trace, Hermiticity
  /// and positivity (mixed, eigenvalues >= -1e-10) are violated.
  void check_invariants(double tol = 1e-12) const;

 private:
  QuantumState(int width, bool pure, std::vector<cplx> data);

  int width_;
  bool pure_;
  std::vector<cplx> data_;
};

}  // namespace qfs
