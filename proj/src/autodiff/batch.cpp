#include "qfs/autodiff/batch.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qfs {

namespace transform {

Expand Expand::observable(const PauliObservable& obs) {
  Expand e;
  for (const auto& t : obs.terms()) {
    e.coeffs.push_back(t.coeff);
    e.measurements.push_back(Measurement::of(t.string));
  }
  if (e.coeffs.empty()) throw std::invalid_argument("cannot expand an empty observable");
  return e;
}

Expand Expand::all_zeros() { return {{1.0}, {Measurement::all_zeros()}}; }

}  // namespace transform

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct Entry {
  int term = 0;
  std::vector<GateShift> shifts;
  int scale = 1;
  double c = 1.0;
  double w = 1.0;
  double g = 1.0;
  std::size_t output = 0;
};

std::vector<GateShift> with(std::vector<GateShift> s, std::initializer_list<GateShift> extra) {
  s.insert(s.end(), extra.begin(), extra.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<Entry> differentiate(const std::vector<Entry>& in, const Circuit& circuit, DiffOrder order) {
  const auto occ = circuit.occurrences();
  const int n = circuit.n_params();
  auto coeff = [&](std::size_t gate) { return circuit.gates()[gate].angle.coeff; };
  std::vector<Entry> out;
  for (const auto& e : in) {
    auto emit = [&](std::size_t output, double w, std::initializer_list<GateShift> shifts) {
      Entry x = e;
      x.output = output;
      x.w = w;
      x.shifts = with(e.shifts, shifts);
      out.push_back(std::move(x));
    };
    if (order == DiffOrder::gradient) {
      for (int i = 0; i < n; ++i) {
        for (auto o : occ[static_cast<std::size_t>(i)]) {
          const double c = coeff(o);
          emit(static_cast<std::size_t>(i), 0.5 * c, {{o, kHalfPi}});
          emit(static_cast<std::size_t>(i), -0.5 * c, {{o, -kHalfPi}});
        }
      }
    } else if (order == DiffOrder::hessian) {
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const auto out_idx = hessian_index(n, i, j);
          for (auto a : occ[static_cast<std::size_t>(i)]) {
            for (auto b : occ[static_cast<std::size_t>(j)]) {
              const double cc = coeff(a) * coeff(b);
              if (a == b) {
                emit(out_idx, 0.5 * cc, {{a, std::numbers::pi}});
                emit(out_idx, -0.5 * cc, {});
              } else {
                const double q = 0.25 * cc;
                emit(out_idx, q, {{a, kHalfPi}, {b, kHalfPi}});
                emit(out_idx, -q, {{a, -kHalfPi}, {b, kHalfPi}});
                emit(out_idx, -q, {{a, kHalfPi}, {b, -kHalfPi}});
                emit(out_idx, q, {{a, -kHalfPi}, {b, -kHalfPi}});
              }
            }
          }
        }
      }
    } else {
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

std::size_t hessian_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

std::size_t CircuitBatch::circuit_count() const {
  std::set<const Circuit*> distinct;
  for (const auto& j : jobs) distinct.insert(j.circuit.get());
  return distinct.size();
}

std::vector<Estimate> CircuitBatch::recombine(std::span<const Estimate> results) const {
  if (results.size() != jobs.size()) throw std::invalid_argument("result count does not match job count");
  std::vector<Estimate> out;
  out.reserve(outputs.size());
  for (const auto& terms : outputs) {
    Estimate e;
    for (const auto& [job, coeff] : terms) {
      e.value += coeff * results[job].value;
      e.variance += coeff * coeff * results[job].variance;
      e.shots = std::max(e.shots, results[job].shots);
    }
    out.push_back(e);
  }
  return out;
}

CircuitBatch compose(const Circuit& circuit, std::span<const double> params,
                     std::span<const Transform> transforms) {
  if (params.size() != static_cast<std::size_t>(circuit.n_params())) {
    throw std::invalid_argument("parameter vector length mismatch");
  }
  if (transforms.empty() || !std::holds_alternative<transform::Expand>(transforms.front())) {
    throw std::invalid_argument("compose: the first transform must be an expansion");
  }
  const auto& expand = std::get<transform::Expand>(transforms.front());
  if (expand.coeffs.size() != expand.measurements.size() || expand.coeffs.empty()) {
    throw std::invalid_argument("compose: malformed expansion");
  }

  std::vector<Entry> entries;
  for (std::size_t k = 0; k < expand.coeffs.size(); ++k) {
    Entry e;
    e.term = static_cast<int>(k);
    e.c = expand.coeffs[k];
    entries.push_back(std::move(e));
  }

  DiffOrder order = DiffOrder::none;
  const transform::Fold* fold = nullptr;
  bool differentiated = false;
  for (std::size_t s = 1; s < transforms.size(); ++s) {
    const auto& t = transforms[s];
    if (std::holds_alternative<transform::Expand>(t)) {
      throw std::invalid_argument("compose: expansion may only appear first");
    } else if (const auto* d = std::get_if<transform::Differentiate>(&t)) {
      if (differentiated) throw std::invalid_argument("compose: differentiation applied twice");
      differentiated = true;
      order = d->order;
      entries = differentiate(entries, circuit, order);
    } else {
      const auto& f = std::get<transform::Fold>(t);
      if (fold) throw std::invalid_argument("compose: folding applied twice");
      if (f.scale_factors.empty() || f.scale_factors.size() != f.gamma.size() || !f.folder) {
        throw std::invalid_argument("compose: malformed fold transform");
      }
      fold = &f;
      std::vector<Entry> folded;
      folded.reserve(entries.size() * f.scale_factors.size());
      for (const auto& e : entries) {
        for (std::size_t j = 0; j < f.scale_factors.size(); ++j) {
          Entry x = e;
          x.scale = f.scale_factors[j];
          x.g = f.gamma[j];
          folded.push_back(std::move(x));
        }
      }
      entries = std::move(folded);
    }
  }

  CircuitBatch batch;
  batch.n_params = circuit.n_params();
  batch.order = order;
  const int n = circuit.n_params();
  const std::size_t n_outputs = order == DiffOrder::none       ? 1
                                : order == DiffOrder::gradient ? static_cast<std::size_t>(n)
                                                               : static_cast<std::size_t>(n * (n + 1) / 2);

  std::map<JobKey, std::size_t> index;
  for (const auto& e : entries) index.emplace(JobKey{e.term, e.shifts, e.scale}, 0);
  std::map<std::pair<std::vector<GateShift>, int>, std::shared_ptr<const Circuit>> circuits;
  const std::vector<double> param_copy(params.begin(), params.end());
  for (auto& [key, idx] : index) {
    idx = batch.jobs.size();
    auto& slot = circuits[{key.shifts, key.scale}];
    if (!slot) {
      Circuit c = circuit;
      for (const auto& s : key.shifts) c = c.shifted(s.gate, s.delta);
      slot = std::make_shared<const Circuit>(fold ? fold->folder(c, key.scale) : std::move(c));
    }
    batch.jobs.push_back({slot, param_copy, expand.measurements[static_cast<std::size_t>(key.term)]});
    batch.keys.push_back(key);
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> raw(n_outputs);
  for (const auto& e : entries) {
    raw[e.output].emplace_back(index.at(JobKey{e.term, e.shifts, e.scale}), (e.c * e.w) * e.g);
  }
  batch.outputs.resize(n_outputs);
  for (std::size_t o = 0; o < n_outputs; ++o) {
    auto& r = raw[o];
    std::sort(r.begin(), r.end());
    for (const auto& [job, coeff] : r) {
      auto& dst = batch.outputs[o];
      if (!dst.empty() && dst.back().first == job) {
        dst.back().second += coeff;
      } else {
        dst.emplace_back(job, coeff);
      }
    }
  }
  return batch;
}

std::vector<Estimate> execute(const CircuitBatch& batch, Estimator& estimator) {
  const auto results = estimator.evaluate(batch.jobs);
  return batch.recombine(results);
}

}  // namespace qfs
