#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qfs/core/pauli.hpp"

namespace qfs::tfim {

inline constexpr int kMinSites = 2;
inline constexpr int kMaxSites = 12;
/// Diagonal energy placed on padding rows when the orbit count is not a power of two.
inline constexpr double kPaddingEnergy = 1e3;

/// Bit i of `bits` is the spin at site i (0 = up along z).
using SpinConfig = std::uint32_t;

/// Site-ordered text form, site 0 first.
std::string config_string(SpinConfig bits, int L);
SpinConfig rotate(SpinConfig bits, int L);

struct TranslationOrbit {
  /// Sorted by config_string.
  std::vector<SpinConfig> members;
  /// Member with the lexicographically largest config_string.
  SpinConfig representative = 0;
};

/// Translation orbits of the even-parity sector, ordered by ascending
/// representative string.
struct CompositeBasis {
  int L = 0;
  std::vector<TranslationOrbit> orbits;

  [[nodiscard]] int size() const { return static_cast<int>(orbits.size()); }
  /// Qubits needed to encode the orbits: ceil(log2(size)).
  [[nodiscard]] int n_qubits() const;
};

/// H(r) = H0 + r * H1 in the normalized orbit basis.
struct ReducedHamiltonian {
  CompositeBasis basis;
  Eigen::MatrixXd H0;
  Eigen::MatrixXd H1;

  [[nodiscard]] Eigen::MatrixXd at(double r) const { return H0 + r * H1; }
};

/// -sum X_i X_{i+1} (H0) and -sum Z_i (H1), periodic, qubit i = site i.
PauliObservable full_tfim(int L);
CompositeBasis composite_basis(int L);
ReducedHamiltonian reduce(int L);

/// Coefficients tr(M P) / 2^n over all Pauli strings; |c| < tol dropped.
/// Basis index k encodes qubit q in bit (n-1-q).
PauliObservable pauli_decompose(const Eigen::MatrixXd& m, double tol = 1e-12,
                                Partition partition = Partition::H0);

/// Pads to the next power of two with `pad_value` on the new diagonal entries.
Eigen::MatrixXd pad_to_power_of_two(const Eigen::MatrixXd& m, double pad_value);

/// Qubit observable of the reduced Hamiltonian, H0 and H1 partitions
/// decomposed separately; padding energy lives in H0.
PauliObservable reduced_observable(const ReducedHamiltonian& h);

}  // namespace qfs::tfim
