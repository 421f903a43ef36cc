#include "qfs/core/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qfs {

namespace {

bool allowed_coeff(double c) { return c == 1.0 || c == -1.0 || c == 0.5 || c == -0.5; }

}  // namespace

Circuit::Circuit(int width, int n_params) : width_(width), n_params_(n_params) {
  if (width < 1) throw std::invalid_argument("circuit width must be >= 1");
  if (n_params < 0) throw std::invalid_argument("negative parameter count");
}

Circuit& Circuit::add(const Gate& gate) {
  const int k = arity(gate.kind);
  for (int i = 0; i < k; ++i) {
    const int q = gate.qubits[static_cast<std::size_t>(i)];
    if (q < 0 || q >= width_) {
      throw std::out_of_range(std::string(name(gate.kind)) + ": qubit " + std::to_string(q) +
                              " outside width " + std::to_string(width_));
    }
    for (int j = 0; j < i; ++j) {
      if (gate.qubits[static_cast<std::size_t>(j)] == q) {
        throw std::invalid_argument(std::string(name(gate.kind)) + ": repeated qubit " +
                                    std::to_string(q));
      }
    }
  }
  if (gate.angle.symbolic()) {
    if (!is_rotation(gate.kind)) {
      throw std::invalid_argument(std::string(name(gate.kind)) + " cannot carry a symbolic angle");
    }
    if (gate.angle.param >= n_params_) {
      throw std::out_of_range("parameter index " + std::to_string(gate.angle.param) +
                              " >= n_params " + std::to_string(n_params_));
    }
    if (!allowed_coeff(gate.angle.coeff)) {
      throw std::invalid_argument("symbolic angle coefficient must be +-1 or +-1/2");
    }
  }
  if (!std::isfinite(gate.angle.offset)) throw std::invalid_argument("non-finite angle");
  Gate stored = gate;
  for (int i = k; i < 3; ++i) stored.qubits[static_cast<std::size_t>(i)] = 0;
  if (!has_angle(gate.kind)) stored.angle = {};
  gates_.push_back(stored);
  return *this;
}

Circuit& Circuit::append(const Circuit& other, std::span<const int> qubit_map) {
  if (!qubit_map.empty() && qubit_map.size() != static_cast<std::size_t>(other.width_)) {
    throw std::invalid_argument("qubit map length must equal the appended circuit width");
  }
  if (qubit_map.empty() && other.width_ > width_) {
    throw std::invalid_argument("appended circuit is wider than the target");
  }
  for (Gate g : other.gates_) {
    if (!qubit_map.empty()) {
      for (int i = 0; i < arity(g.kind); ++i) {
        auto& q = g.qubits[static_cast<std::size_t>(i)];
        q = qubit_map[static_cast<std::size_t>(q)];
      }
    }
    add(g);
  }
  return *this;
}

Circuit Circuit::dagger() const {
  Circuit out(width_, n_params_);
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(inverse(*it));
  return out;
}

Circuit Circuit::bound(std::span<const double> params) const {
  if (params.size() != static_cast<std::size_t>(n_params_)) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
  Circuit out = *this;
  for (auto& g : out.gates_) {
    if (g.angle.symbolic()) g.angle = Angle::constant(g.angle.resolve(params));
  }
  return out;
}

Circuit Circuit::shifted(std::size_t index, double delta) const {
  if (index >= gates_.size()) throw std::out_of_range("gate index out of range");
  if (!has_angle(gates_[index].kind)) throw std::invalid_argument("gate has no angle to shift");
  Circuit out = *this;
  out.gates_[index].angle.offset += delta;
  return out;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::size_t Circuit::multi_qubit_gate_count() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate& g) { return arity(g.kind) > 1; }));
}

std::vector<std::vector<std::size_t>> Circuit::occurrences() const {
  std::vector<std::vector<std::size_t>> occ(static_cast<std::size_t>(n_params_));
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].angle.symbolic()) occ[static_cast<std::size_t>(gates_[i].angle.param)].push_back(i);
  }
  return occ;
}

}  // namespace qfs
