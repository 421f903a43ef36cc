#include <bit>

#include "qfs/core/kernels.hpp"

namespace qfs::kernels::serial {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

void apply_1q(std::span<cplx> v, int bit, const Mat2& m, std::uint64_t control_mask) {
  const std::uint64_t t = std::uint64_t{1} << bit;
  const std::uint64_t size = v.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & t) || (i & control_mask) != control_mask) continue;
    const cplx a = v[i];
    const cplx b = v[i | t];
    v[i] = m[0] * a + m[1] * b;
    v[i | t] = m[2] * a + m[3] * b;
  }
}

void apply_swap(std::span<cplx> v, int a, int b, std::uint64_t control_mask) {
  const std::uint64_t ma = std::uint64_t{1} << a;
  const std::uint64_t mb = std::uint64_t{1} << b;
  const std::uint64_t size = v.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & ma) && !(i & mb) && (i & control_mask) == control_mask) {
      std::swap(v[i], v[(i ^ ma) | mb]);
    }
  }
}

void depolarize(std::span<cplx> rho, int n, std::uint64_t mask, double p) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const double keep = 1.0 - p;
  const double share = p / static_cast<double>(std::uint64_t{1} << std::popcount(mask));
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (r & mask) continue;
    for (std::uint64_t c = 0; c < dim; ++c) {
      if (c & mask) continue;
      // Block rho[r|sr, c|sc] over subsets sr, sc of the masked bits.
      cplx traced = 0.0;
      std::uint64_t s = 0;
      do {
        traced += rho[((r | s) << n) | (c | s)];
        s = (s - mask) & mask;
      } while (s != 0);
      const cplx add = share * traced;
      std::uint64_t sr = 0;
      do {
        std::uint64_t sc = 0;
        do {
          auto& e = rho[((r | sr) << n) | (c | sc)];
          e = sr == sc ? keep * e + add : keep * e;
          sc = (sc - mask) & mask;
        } while (sc != 0);
        sr = (sr - mask) & mask;
      } while (sr != 0);
    }
  }
}

cplx pauli_pure(std::span<const cplx> psi, std::uint64_t x, std::uint64_t z, int ny) {
  cplx acc = 0.0;
  const std::uint64_t size = psi.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    const cplx term = std::conj(psi[i ^ x]) * psi[i];
    acc += (std::popcount(i & z) & 1) ? -term : term;
  }
  return acc * kIPow[ny & 3];
}

cplx pauli_mixed(std::span<const cplx> rho, int n, std::uint64_t x, std::uint64_t z, int ny) {
  cplx acc = 0.0;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t i = 0; i < dim; ++i) {
    const cplx term = rho[(i << n) | (i ^ x)];
    acc += (std::popcount(i & z) & 1) ? -term : term;
  }
  return acc * kIPow[ny & 3];
}

double even_parity_pure(std::span<const cplx> psi, std::uint64_t mask) {
  double acc = 0.0;
  const std::uint64_t size = psi.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if (!(std::popcount(i & mask) & 1)) acc += std::norm(psi[i]);
  }
  return acc;
}

double even_parity_mixed(std::span<const cplx> rho, int n, std::uint64_t mask) {
  double acc = 0.0;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (!(std::popcount(i & mask) & 1)) acc += rho[(i << n) | i].real();
  }
  return acc;
}

}  // namespace qfs::kernels::serial
