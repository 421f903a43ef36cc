#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qfs/core/kernels.hpp"

namespace k = qfs::kernels;

namespace {

std::vector<k::cplx> random_vector(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<k::cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

const k::Mat2 kHadamard{k::cplx{M_SQRT1_2}, k::cplx{M_SQRT1_2}, k::cplx{M_SQRT1_2}, k::cplx{-M_SQRT1_2}};

template <void (*Apply)(std::span<k::cplx>, int, const k::Mat2&, std::uint64_t)>
void BM_apply_1q(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  auto v = random_vector(std::size_t{1} << bits);
  for (auto _ : state) {
    for (int b = 0; b < bits; ++b) Apply(v, b, kHadamard, 0);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * bits * static_cast<std::int64_t>(v.size()));
}

template <void (*Depolarize)(std::span<k::cplx>, int, std::uint64_t, double)>
void BM_depolarize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto rho = random_vector(std::size_t{1} << (2 * n));
  for (auto _ : state) {
    Depolarize(rho, n, 0b11, 8e-3);
    benchmark::DoNotOptimize(rho.data());
  }
}

template <k::cplx (*Pauli)(std::span<const k::cplx>, int, std::uint64_t, std::uint64_t, int)>
void BM_pauli_mixed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rho = random_vector(std::size_t{1} << (2 * n));
  for (auto _ : state) benchmark::DoNotOptimize(Pauli(rho, n, 0b101, 0b110, 1));
}

}  // namespace

BENCHMARK(BM_apply_1q<k::serial::apply_1q>)->Name("apply_1q/serial")->DenseRange(10, 20, 5);
BENCHMARK(BM_apply_1q<k::omp::apply_1q>)->Name("apply_1q/omp")->DenseRange(10, 20, 5);
BENCHMARK(BM_depolarize<k::serial::depolarize>)->Name("depolarize/serial")->DenseRange(5, 9, 2);
BENCHMARK(BM_depolarize<k::omp::depolarize>)->Name("depolarize/omp")->DenseRange(5, 9, 2);
BENCHMARK(BM_pauli_mixed<k::serial::pauli_mixed>)->Name("pauli_mixed/serial")->DenseRange(5, 9, 2);
BENCHMARK(BM_pauli_mixed<k::omp::pauli_mixed>)->Name("pauli_mixed/omp")->DenseRange(5, 9, 2);

BENCHMARK_MAIN();
