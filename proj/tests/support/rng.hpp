#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace qfs::test {

/// splitmix64 stream; small and fully specified so generated cases are stable
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform in [0, n).
  int index(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool coin() { return (next() & 1) != 0; }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::vector<double> angles(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = uniform(-std::numbers::pi, std::numbers::pi);
    return v;
  }

  std::vector<double> unit_vector(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (auto& x : v) {
      x = normal();
      norm += x * x;
    }
    for (auto& x : v) x /= std::sqrt(norm);
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace qfs::test
