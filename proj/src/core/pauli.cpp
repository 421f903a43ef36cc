#include "qfs/core/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qfs {

PauliString::PauliString(std::string ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw std::invalid_argument("empty Pauli string");
  if (ops_.size() > 32) throw std::invalid_argument("Pauli string wider than 32 qubits");
  for (char c : ops_) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
    }
  }
}

PauliString PauliString::identity(int width) {
  if (width < 1) throw std::invalid_argument("width must be >= 1");
  return PauliString(std::string(static_cast<std::size_t>(width), 'I'));
}

PauliString PauliString::from_sparse(int width, std::string_view letters,
                                     std::initializer_list<int> qubits) {
  if (letters.size() != qubits.size()) throw std::invalid_argument("letters/qubits length mismatch");
  std::string ops(static_cast<std::size_t>(width), 'I');
  std::size_t i = 0;
  for (int q : qubits) {
    if (q < 0 || q >= width) throw std::out_of_range("qubit outside width");
    if (ops[static_cast<std::size_t>(q)] != 'I') throw std::invalid_argument("repeated qubit");
    ops[static_cast<std::size_t>(q)] = letters[i++];
  }
  return PauliString(std::move(ops));
}

bool PauliString::is_identity() const {
  return std::all_of(ops_.begin(), ops_.end(), [](char c) { return c == 'I'; });
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  const int n = width();
  for (int q = 0; q < n; ++q) {
    const char c = at(q);
    if (c == 'X' || c == 'Y') m |= std::uint64_t{1} << (n - 1 - q);
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  const int n = width();
  for (int q = 0; q < n; ++q) {
    const char c = at(q);
    if (c == 'Z' || c == 'Y') m |= std::uint64_t{1} << (n - 1 - q);
  }
  return m;
}

std::uint64_t PauliString::support_mask() const { return x_mask() | z_mask(); }

int PauliString::y_count() const {
  return static_cast<int>(std::count(ops_.begin(), ops_.end(), 'Y'));
}

std::string PauliString::label() const {
  std::string out;
  for (int q = 0; q < width(); ++q) {
    if (at(q) == 'I') continue;
    if (!out.empty()) out += ' ';
    out += at(q);
    out += std::to_string(q);
  }
  return out.empty() ? "I" : out;
}

PauliObservable::PauliObservable(int width) : width_(width) {
  if (width < 1) throw std::invalid_argument("observable width must be >= 1");
}

PauliObservable& PauliObservable::add(double coeff, const PauliString& string, Partition partition) {
  if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite Pauli coefficient");
  if (string.width() != width_) throw std::invalid_argument("Pauli string width mismatch");
  for (auto& t : terms_) {
    if (t.partition == partition && t.string == string) {
      t.coeff += coeff;
      return *this;
    }
  }
  terms_.push_back({coeff, string, partition});
  return *this;
}

PauliObservable PauliObservable::part(Partition partition) const {
  PauliObservable out(width_);
  for (const auto& t : terms_) {
    if (t.partition == partition) out.add(t.coeff, t.string);
  }
  return out;
}

PauliObservable PauliObservable::at(double r) const {
  PauliObservable out(width_);
  for (const auto& t : terms_) out.add(t.partition == Partition::H1 ? r * t.coeff : t.coeff, t.string);
  return out;
}

PauliObservable PauliObservable::scaled(double factor) const {
  PauliObservable out(width_);
  for (const auto& t : terms_) out.add(factor * t.coeff, t.string, t.partition);
  return out;
}

std::vector<std::complex<double>> PauliObservable::dense(double r) const {
  if (width_ > 12) throw std::invalid_argument("dense matrix requested for more than 12 qubits");
  const std::size_t dim = std::size_t{1} << width_;
  std::vector<std::complex<double>> m(dim * dim);
  for (const auto& t : terms_) {
    const double c = t.partition == Partition::H1 ? r * t.coeff : t.coeff;
    const auto x = t.string.x_mask();
    const auto z = t.string.z_mask();
    static constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const auto iy = kIPow[t.string.y_count() % 4];
    for (std::size_t col = 0; col < dim; ++col) {
      const double sign = (std::popcount(col & z) % 2) ? -1.0 : 1.0;
      m[(col ^ x) * dim + col] += c * sign * iy;
    }
  }
  return m;
}

}  // namespace qfs
