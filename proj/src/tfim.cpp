#include "qfs/tfim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qfs::tfim {

namespace {

void check_sites(int L) {
  if (L % 2 != 0) throw std::invalid_argument("L must be even, got " + std::to_string(L));
  if (L < kMinSites || L > kMaxSites) {
    throw std::invalid_argument("L must lie in [" + std::to_string(kMinSites) + ", " +
                                std::to_string(kMaxSites) + "], got " + std::to_string(L));
  }
}

bool string_less(SpinConfig a, SpinConfig b, int L) { return config_string(a, L) < config_string(b, L); }

}  // namespace

std::string config_string(SpinConfig bits, int L) {
  std::string s(static_cast<std::size_t>(L), '0');
  for (int i = 0; i < L; ++i) {
    if ((bits >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

SpinConfig rotate(SpinConfig bits, int L) {
  const SpinConfig mask = (SpinConfig{1} << L) - 1;
  return ((bits << 1) | (bits >> (L - 1))) & mask;
}

int CompositeBasis::n_qubits() const {
  const auto m = static_cast<unsigned>(orbits.size());
  return std::max(1, static_cast<int>(std::bit_width(m - 1)));
}

PauliObservable full_tfim(int L) {
  check_sites(L);
  PauliObservable h(L);
  for (int i = 0; i < L; ++i) h.add(-1.0, PauliString::from_sparse(L, "XX", {i, (i + 1) % L}), Partition::H0);
  for (int i = 0; i < L; ++i) h.add(-1.0, PauliString::from_sparse(L, "Z", {i}), Partition::H1);
  return h;
}

CompositeBasis composite_basis(int L) {
  check_sites(L);
  CompositeBasis basis{L, {}};
  const SpinConfig count = SpinConfig{1} << L;
  std::vector<bool> seen(count, false);
  for (SpinConfig c = 0; c < count; ++c) {
    if (seen[c] || std::popcount(c) % 2 != 0) continue;
    TranslationOrbit orbit;
    SpinConfig x = c;
    do {
      if (!seen[x]) {
        seen[x] = true;
        orbit.members.push_back(x);
      }
      x = rotate(x, L);
    } while (x != c);
    std::sort(orbit.members.begin(), orbit.members.end(),
              [L](SpinConfig a, SpinConfig b) { return string_less(a, b, L); });
    orbit.representative = orbit.members.back();
    basis.orbits.push_back(std::move(orbit));
  }
  std::sort(basis.orbits.begin(), basis.orbits.end(), [L](const auto& a, const auto& b) {
    return string_less(a.representative, b.representative, L);
  });
  return basis;
}

ReducedHamiltonian reduce(int L) {
  auto basis = composite_basis(L);
  const int m = basis.size();
  std::map<SpinConfig, int> orbit_of;
  for (int k = 0; k < m; ++k) {
    for (auto c : basis.orbits[static_cast<std::size_t>(k)].members) orbit_of[c] = k;
  }
  auto norm = [&](int k) {
    return 1.0 / std::sqrt(static_cast<double>(basis.orbits[static_cast<std::size_t>(k)].members.size()));
  };
  Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(m, m);
  // H|orbit_j> = sum over members c and terms T of T|c>; project onto orbit_i.
  for (int j = 0; j < m; ++j) {
    for (auto c : basis.orbits[static_cast<std::size_t>(j)].members) {
      for (int s = 0; s < L; ++s) {
        const SpinConfig flipped = c ^ (SpinConfig{1} << s) ^ (SpinConfig{1} << ((s + 1) % L));
        const int i = orbit_of.at(flipped);
        h0(i, j) -= norm(i) * norm(j);
        h1(j, j) -= ((c >> s) & 1U) ? -norm(j) * norm(j) : norm(j) * norm(j);
      }
    }
  }
  return {std::move(basis), std::move(h0), std::move(h1)};
}

Eigen::MatrixXd pad_to_power_of_two(const Eigen::MatrixXd& m, double pad_value) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square");
  const auto dim = static_cast<Eigen::Index>(std::bit_ceil(static_cast<std::uint64_t>(m.rows())));
  if (dim == m.rows()) return m;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  for (Eigen::Index i = m.rows(); i < dim; ++i) out(i, i) = pad_value;
  return out;
}

PauliObservable pauli_decompose(const Eigen::MatrixXd& m, double tol, Partition partition) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  const auto dim = static_cast<std::uint64_t>(m.rows());
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("matrix dimension must be a power of two >= 2");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("matrix must be symmetric");
  }
  const int n = std::countr_zero(dim);
  PauliObservable obs(n);
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::string ops(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) ops[static_cast<std::size_t>(q)] = kLetters[(code >> (2 * (n - 1 - q))) & 3U];
    const PauliString p(ops);
    const auto x = p.x_mask();
    const auto z = p.z_mask();
    const int ny = p.y_count();
    // tr(M P) = sum_i M[i, i^x] * phase(i); for real M only ny even survives.
    if (ny % 2 != 0) continue;
    double acc = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i ^ x));
      acc += (std::popcount(i & z) % 2) ? -v : v;
    }
    if ((ny / 2) % 2 != 0) acc = -acc;
    const double c = acc / static_cast<double>(dim);
    if (std::abs(c) >= tol) obs.add(c, p, partition);
  }
  return obs;
}

PauliObservable reduced_observable(const ReducedHamiltonian& h) {
  const auto h0 = pad_to_power_of_two(h.H0, kPaddingEnergy);
  const auto h1 = pad_to_power_of_two(h.H1, 0.0);
  const int n = std::countr_zero(static_cast<std::uint64_t>(h0.rows()));
  PauliObservable obs(std::max(n, 1));
  const auto p0 = pauli_decompose(h0, 1e-12, Partition::H0);
  const auto p1 = pauli_decompose(h1, 1e-12, Partition::H1);
  for (const auto& t : p0.terms()) obs.add(t.coeff, t.string, Partition::H0);
  for (const auto& t : p1.terms()) obs.add(t.coeff, t.string, Partition::H1);
  return obs;
}

}  // namespace qfs::tfim
