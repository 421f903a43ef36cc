#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfs/core/gate.hpp"

namespace qfs {

inline constexpr int kMaxQubits = 7;

/// Ordered gate list over `width` qubits with `n_params` symbolic parameters.
///
/// Symbolic angles are only accepted on RX/RY/RZ with a coefficient in
/// {+1, -1, +1/2, -1/2}; every such gate obeys the two-term shift rule, so a
/// circuit that constructs successfully is always differentiable.
class Circuit {
 public:
  explicit Circuit(int width, int n_params = 0);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int n_params() const { return n_params_; }
  [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
  [[nodiscard]] std::size_t size() const { return gates_.size(); }
  [[nodiscard]] bool empty() const { return gates_.empty(); }

  Circuit& add(const Gate& gate);

  Circuit& ry(int q, Angle a) { return add({GateKind::RY, {q, 0, 0}, a}); }
  Circuit& rx(int q, Angle a) { return add({GateKind::RX, {q, 0, 0}, a}); }
  Circuit& rz(int q, Angle a) { return add({GateKind::RZ, {q, 0, 0}, a}); }
  Circuit& ry(int q, double v) { return ry(q, Angle::constant(v)); }
  Circuit& rx(int q, double v) { return rx(q, Angle::constant(v)); }
  Circuit& rz(int q, double v) { return rz(q, Angle::constant(v)); }
  Circuit& h(int q) { return add({GateKind::H, {q, 0, 0}, {}}); }
  Circuit& x(int q) { return add({GateKind::X, {q, 0, 0}, {}}); }
  Circuit& s(int q) { return add({GateKind::S, {q, 0, 0}, {}}); }
  Circuit& sdg(int q) { return add({GateKind::Sdg, {q, 0, 0}, {}}); }
  Circuit& t(int q) { return add({GateKind::T, {q, 0, 0}, {}}); }
  Circuit& tdg(int q) { return add({GateKind::Tdg, {q, 0, 0}, {}}); }
  Circuit& cnot(int control, int target) { return add({GateKind::CNOT, {control, target, 0}, {}}); }
  Circuit& swap(int a, int b) { return add({GateKind::SWAP, {a, b, 0}, {}}); }
  Circuit& cry(int control, int target, double v) {
    return add({GateKind::CRY, {control, target, 0}, Angle::constant(v)});
  }
  Circuit& cswap(int control, int a, int b) { return add({GateKind::CSWAP, {control, a, b}, {}}); }

  /// Appends `other` with its qubit q mapped to `qubit_map[q]` (identity when
  /// empty). Parameters keep their indices.
  Circuit& append(const Circuit& other, std::span<const int> qubit_map = {});

  /// Reversed gate order with every gate inverted; symbolic angles are negated.
  [[nodiscard]] Circuit dagger() const;
  /// Same gates with every symbolic angle replaced by its value at `params`.
  [[nodiscard]] Circuit bound(std::span<const double> params) const;
  /// Copy with `delta` added to the angle offset of gate `index`.
  [[nodiscard]] Circuit shifted(std::size_t index, double delta) const;

  [[nodiscard]] std::size_t count(GateKind kind) const;
  [[nodiscard]] std::size_t multi_qubit_gate_count() const;
  /// Gate indices at which each parameter occurs.
  [[nodiscard]] std::vector<std::vector<std::size_t>> occurrences() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int width_;
  int n_params_;
  std::vector<Gate> gates_;
};

}  // namespace qfs
