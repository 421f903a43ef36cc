#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "qfs/core/kernels.hpp"

namespace qfs::kernels::omp {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
// Below this many loop iterations the fork/join overhead dominates.
constexpr std::int64_t kParallelThreshold = 1 << 12;
constexpr std::int64_t kBlocks = 64;

inline std::uint64_t insert_zero(std::uint64_t k, std::uint64_t bit) {
  const std::uint64_t low = k & (bit - 1);
  return ((k ^ low) << 1) | low;
}

// Sum of f(i) over [0, size) in fixed blocks, combined in block order.
template <typename T, typename F>
T blocked_sum(std::int64_t size, F f) {
  const std::int64_t block = (size + kBlocks - 1) / kBlocks;
  std::vector<T> partial(static_cast<std::size_t>(kBlocks), T{});
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::int64_t b = 0; b < kBlocks; ++b) {
    T acc{};
    const std::int64_t hi = std::min(size, (b + 1) * block);
    for (std::int64_t i = b * block; i < hi; ++i) acc += f(static_cast<std::uint64_t>(i));
    partial[static_cast<std::size_t>(b)] = acc;
  }
  T total{};
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace

void apply_1q(std::span<cplx> v, int bit, const Mat2& m, std::uint64_t control_mask) {
  const std::uint64_t t = std::uint64_t{1} << bit;
  const auto half = static_cast<std::int64_t>(v.size() / 2);
#pragma omp parallel for schedule(static) if (half >= kParallelThreshold)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::uint64_t i = insert_zero(static_cast<std::uint64_t>(k), t);
    if ((i & control_mask) != control_mask) continue;
    const cplx a = v[i];
    const cplx b = v[i | t];
    v[i] = m[0] * a + m[1] * b;
    v[i | t] = m[2] * a + m[3] * b;
  }
}

void apply_swap(std::span<cplx> v, int a, int b, std::uint64_t control_mask) {
  const std::uint64_t ma = std::uint64_t{1} << a;
  const std::uint64_t mb = std::uint64_t{1} << b;
  const auto size = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::int64_t k = 0; k < size; ++k) {
    const auto i = static_cast<std::uint64_t>(k);
    if ((i & ma) && !(i & mb) && (i & control_mask) == control_mask) {
      std::swap(v[i], v[(i ^ ma) | mb]);
    }
  }
}

void depolarize(std::span<cplx> rho, int n, std::uint64_t mask, double p) {
  const auto dim = static_cast<std::int64_t>(std::uint64_t{1} << n);
  const double keep = 1.0 - p;
  const double share = p / static_cast<double>(std::uint64_t{1} << std::popcount(mask));
#pragma omp parallel for schedule(static) if (dim * dim >= kParallelThreshold)
  for (std::int64_t rr = 0; rr < dim; ++rr) {
    const auto r = static_cast<std::uint64_t>(rr);
    if (r & mask) continue;
    for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(dim); ++c) {
      if (c & mask) continue;
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
  const auto acc = blocked_sum<cplx>(static_cast<std::int64_t>(psi.size()), [&](std::uint64_t i) {
    const cplx term = std::conj(psi[i ^ x]) * psi[i];
    return (std::popcount(i & z) & 1) ? -term : term;
  });
  return acc * kIPow[ny & 3];
}

cplx pauli_mixed(std::span<const cplx> rho, int n, std::uint64_t x, std::uint64_t z, int ny) {
  const auto dim = static_cast<std::int64_t>(std::uint64_t{1} << n);
  const auto acc = blocked_sum<cplx>(dim, [&](std::uint64_t i) {
    const cplx term = rho[(i << n) | (i ^ x)];
    return (std::popcount(i & z) & 1) ? -term : term;
  });
  return acc * kIPow[ny & 3];
}

double even_parity_pure(std::span<const cplx> psi, std::uint64_t mask) {
  return blocked_sum<double>(static_cast<std::int64_t>(psi.size()), [&](std::uint64_t i) {
    return (std::popcount(i & mask) & 1) ? 0.0 : std::norm(psi[i]);
  });
}

double even_parity_mixed(std::span<const cplx> rho, int n, std::uint64_t mask) {
  const auto dim = static_cast<std::int64_t>(std::uint64_t{1} << n);
  return blocked_sum<double>(dim, [&](std::uint64_t i) {
    return (std::popcount(i & mask) & 1) ? 0.0 : rho[(i << n) | i].real();
  });
}

}  // namespace qfs::kernels::omp
