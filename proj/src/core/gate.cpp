#include "qfs/core/gate.hpp"

namespace qfs {

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::SWAP:
    case GateKind::CRY:
      return 2;
    case GateKind::CSWAP:
      return 3;
    default:
      return 1;
  }
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RY || kind == GateKind::RX || kind == GateKind::RZ;
}

bool has_angle(GateKind kind) { return is_rotation(kind) || kind == GateKind::CRY; }

std::string_view name(GateKind kind) {
  switch (kind) {
    case GateKind::RY: return "RY";
    case GateKind::RX: return "RX";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "Tdg";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    case GateKind::CRY: return "CRY";
    case GateKind::CSWAP: return "CSWAP";
  }
  return "?";
}

Gate inverse(const Gate& gate) {
  Gate out = gate;
  switch (gate.kind) {
    case GateKind::S: out.kind = GateKind::Sdg; break;
    case GateKind::Sdg: out.kind = GateKind::S; break;
    case GateKind::T: out.kind = GateKind::Tdg; break;
    case GateKind::Tdg: out.kind = GateKind::T; break;
    default:
      if (has_angle(gate.kind)) out.angle = gate.angle.negated();
      break;
  }
  return out;
}

}  // namespace qfs
