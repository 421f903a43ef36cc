#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace qfs {

enum class GateKind : std::uint8_t {
  RY,
  RX,
  RZ,
  H,
  X,
  S,
  Sdg,
  T,
  Tdg,
  CNOT,
  SWAP,
  CRY,
  CSWAP,
};

/// Rotation angle `coeff * params[param] + offset`; a constant when `param < 0`.
struct Angle {
  int param = -1;
  double coeff = 1.0;
  double offset = 0.0;

  static constexpr Angle constant(double value) { return {-1, 1.0, value}; }
  static constexpr Angle symbol(int param, double coeff = 1.0, double offset = 0.0) {
    return {param, coeff, offset};
  }

  [[nodiscard]] constexpr bool symbolic() const { return param >= 0; }
  [[nodiscard]] constexpr Angle negated() const { return {param, -coeff, -offset}; }
  [[nodiscard]] double resolve(std::span<const double> params) const {
    return symbolic() ? coeff * params[static_cast<std::size_t>(param)] + offset : offset;
  }

  friend constexpr bool operator==(const Angle&, const Angle&) = default;
};

/// Qubits are listed controls first, targets last:
/// CNOT{c, t}, CRY{c, t}, SWAP{a, b}, CSWAP{c, a, b}.
struct Gate {
  GateKind kind = GateKind::X;
  std::array<int, 3> qubits{};
  Angle angle{};

  friend constexpr bool operator==(const Gate&, const Gate&) = default;
};

[[nodiscard]] int arity(GateKind kind);
[[nodiscard]] bool is_rotation(GateKind kind);  // RX, RY, RZ
[[nodiscard]] bool has_angle(GateKind kind);    // rotations and CRY
[[nodiscard]] std::string_view name(GateKind kind);
[[nodiscard]] Gate inverse(const Gate& gate);

}  // namespace qfs
