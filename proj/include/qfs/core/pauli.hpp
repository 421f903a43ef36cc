#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qfs {

/// Letter q applies to qubit q. Qubit 0 is the most significant bit of a
/// basis-state index.
class PauliString {
 public:
  explicit PauliString(std::string ops);
  /// Identity on `width` qubits.
  static PauliString identity(int width);
  /// Single-letter factors placed at the given qubits, identity elsewhere.
  static PauliString from_sparse(int width, std::string_view letters, std::initializer_list<int> qubits);

  [[nodiscard]] const std::string& ops() const { return ops_; }
  [[nodiscard]] int width() const { return static_cast<int>(ops_.size()); }
  [[nodiscard]] char at(int q) const { return ops_[static_cast<std::size_t>(q)]; }
  [[nodiscard]] bool is_identity() const;

  [[nodiscard]] std::uint64_t x_mask() const;  // X and Y positions
  [[nodiscard]] std::uint64_t z_mask() const;  // Z and Y positions
  [[nodiscard]] std::uint64_t support_mask() const;
  [[nodiscard]] int y_count() const;

  /// Compact form like "X0 Z1"; "I" for the identity.
  [[nodiscard]] std::string label() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::string ops_;
};

enum class Partition : std::uint8_t { H0, H1 };

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
  Partition partition = Partition::H0;
};

/// Weighted Pauli sum split into an r-independent part H0 and an r-linear
/// part H1, so H(r) = H0 + r * H1.
class PauliObservable {
 public:
  explicit PauliObservable(int width);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] const std::vector<PauliTerm>& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  /// Adds into an existing term with the same string and partition.
  PauliObservable& add(double coeff, const PauliString& string, Partition partition = Partition::H0);

  /// Terms of one partition, all tagged H0.
  [[nodiscard]] PauliObservable part(Partition partition) const;
  /// H0 + r * H1 as a single-partition observable with merged strings.
  [[nodiscard]] PauliObservable at(double r) const;
  [[nodiscard]] PauliObservable scaled(double factor) const;
  /// Dense 2^n x 2^n matrix of H0 + r * H1; intended for small n.
  [[nodiscard]] std::vector<std::complex<double>> dense(double r) const;

 private:
  int width_;
  std::vector<PauliTerm> terms_;
};

}  // namespace qfs
