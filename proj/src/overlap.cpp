#include "qfs/overlap.hpp"

#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qfs::overlap {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::compute_uncompute: return "compute_uncompute";
    case Method::hadamard_real: return "hadamard_real";
    case Method::hadamard_imag: return "hadamard_imag";
    case Method::swap_test: return "swap_test";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (auto m : {Method::compute_uncompute, Method::hadamard_real, Method::hadamard_imag, Method::swap_test}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown overlap method '" + std::string(s) + "'");
}

int overlap_width(Method m, int n) {
  switch (m) {
    case Method::compute_uncompute: return n;
    case Method::hadamard_real:
    case Method::hadamard_imag: return n + 1;
    case Method::swap_test: return 2 * n + 1;
  }
  return n;
}

void append_toffoli(Circuit& c, int a, int b, int t) {
  c.h(t).cnot(b, t).tdg(t).cnot(a, t).t(t).cnot(b, t).tdg(t).cnot(a, t);
  c.t(b).t(t).h(t).cnot(a, b).t(a).tdg(b).cnot(a, b);
}

void append_cswap(Circuit& c, int control, int a, int b) {
  c.cnot(b, a);
  append_toffoli(c, control, a, b);
  c.cnot(b, a);
}

Circuit controlled(const Circuit& u, int control, std::span<const int> map, int width) {
  if (map.size() != static_cast<std::size_t>(u.width())) throw std::invalid_argument("qubit map size mismatch");
  Circuit out(width, u.n_params());
  auto half = [](Angle a) { return Angle{a.param, a.coeff / 2, a.offset / 2}; };
  for (const auto& g : u.gates()) {
    const int q0 = map[static_cast<std::size_t>(g.qubits[0])];
    switch (g.kind) {
      case GateKind::RY:
      case GateKind::RZ: {
        const Angle h = half(g.angle);
        out.add({g.kind, {q0, 0, 0}, h});
        out.cnot(control, q0);
        out.add({g.kind, {q0, 0, 0}, h.negated()});
        out.cnot(control, q0);
        break;
      }
      case GateKind::X:
        out.cnot(control, q0);
        break;
      case GateKind::CNOT:
        append_toffoli(out, control, q0, map[static_cast<std::size_t>(g.qubits[1])]);
        break;
      default:
        throw std::invalid_argument("no controlled compilation for gate " + std::string(name(g.kind)));
    }
  }
  return out;
}

namespace {

void check_job(const OverlapJob& job) {
  if (job.U_i.width() != job.U_f.width()) throw std::invalid_argument("U_i and U_f widths differ");
  for (const auto& g : job.U_i.gates()) {
    if (g.angle.symbolic()) throw std::invalid_argument("U_i must have bound parameters");
  }
}

std::vector<int> range(int start, int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), start);
  return v;
}

}  // namespace

Circuit build_overlap_circuit(const OverlapJob& job) {
  check_job(job);
  const int n = job.U_f.width();
  const int np = job.U_f.n_params();
  const int width = overlap_width(job.method, n);
  if (width > kMaxQubits) throw std::invalid_argument("overlap circuit exceeds the qubit limit");
  Circuit c(width, np);
  switch (job.method) {
    case Method::compute_uncompute:
      c.append(job.U_i);
      c.append(job.U_f.dagger());
      break;
    case Method::hadamard_real:
    case Method::hadamard_imag: {
      const auto reg = range(1, n);
      c.h(0);
      c.append(controlled(job.U_i, 0, reg, width));
      c.append(controlled(job.U_f.dagger(), 0, reg, width));
      if (job.method == Method::hadamard_real) {
        c.ry(0, -std::numbers::pi / 2);
      } else {
        c.rx(0, std::numbers::pi / 2);
      }
      break;
    }
    case Method::swap_test: {
      c.h(0);
      c.append(job.U_i, range(1, n));
      c.append(job.U_f, range(n + 1, n));
      for (int q = 0; q < n; ++q) append_cswap(c, 0, 1 + q, n + 1 + q);
      c.h(0);
      break;
    }
  }
  return c;
}

transform::Expand readout(Method m, int width) {
  if (m == Method::compute_uncompute) return transform::Expand::all_zeros();
  return {{1.0}, {Measurement::of(PauliString::from_sparse(width, "Z", {0}))}};
}

double susceptibility_factor(Method m) {
  return (m == Method::compute_uncompute || m == Method::swap_test) ? 0.5 : 1.0;
}

OverlapEstimate estimate_overlap(const OverlapJob& job, std::span<const double> params, Estimator& estimator) {
  const Circuit c = build_overlap_circuit(job);
  if (params.size() != static_cast<std::size_t>(c.n_params())) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
  const Transform ts[] = {readout(job.method, c.width())};
  const auto batch = compose(c, params, ts);
  const auto e = execute(batch, estimator).front();
  return {e, job.method == Method::swap_test && e.value < 0.0};
}

HessianResult overlap_hessian(const OverlapJob& job, std::span<const double> params, Estimator& estimator,
                              const transform::Fold* fold) {
  const Circuit c = build_overlap_circuit(job);
  std::vector<Transform> ts{readout(job.method, c.width()), transform::Differentiate{DiffOrder::hessian}};
  if (fold) ts.emplace_back(*fold);
  const auto batch = compose(c, params, ts);
  return to_hessian(batch, execute(batch, estimator));
}

GradientResult overlap_gradient(const OverlapJob& job, std::span<const double> params, Estimator& estimator) {
  const Circuit c = build_overlap_circuit(job);
  const Transform ts[] = {readout(job.method, c.width()), transform::Differentiate{DiffOrder::gradient}};
  const auto batch = compose(c, params, ts);
  return to_gradient(batch, execute(batch, estimator));
}

}  // namespace qfs::overlap
