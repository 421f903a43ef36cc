#include "qfs/core/state.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qfs/core/circuit.hpp"

namespace qfs {

QuantumState::QuantumState(int width, bool pure, std::vector<cplx> data)
    : width_(width), pure_(pure), data_(std::move(data)) {}

QuantumState QuantumState::zero(int width, bool mixed) {
  if (width < 1 || width > kMaxQubits) {
    throw std::invalid_argument("state width must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  const std::uint64_t dim = std::uint64_t{1} << width;
  std::vector<cplx> data(mixed ? dim * dim : dim);
  data[0] = 1.0;
  return {width, !mixed, std::move(data)};
}

QuantumState QuantumState::from_amplitudes(std::vector<cplx> psi) {
  if (psi.empty() || !std::has_single_bit(psi.size())) {
    throw std::invalid_argument("amplitude vector length must be a power of two");
  }
  const int width = std::countr_zero(psi.size());
  if (width < 1 || width > kMaxQubits) throw std::invalid_argument("state width out of range");
  return {width, true, std::move(psi)};
}

cplx QuantumState::amplitude(std::uint64_t i) const {
  if (!pure_) throw std::logic_error("amplitude() on a mixed state");
  return data_.at(i);
}

cplx QuantumState::density(std::uint64_t row, std::uint64_t col) const {
  if (pure_) return data_.at(row) * std::conj(data_.at(col));
  return data_.at((row << width_) | col);
}

double QuantumState::norm() const {
  double acc = 0.0;
  if (pure_) {
    for (const auto& a : data_) acc += std::norm(a);
  } else {
    for (std::uint64_t i = 0; i < dim(); ++i) acc += data_[(i << width_) | i].real();
  }
  return acc;
}

QuantumState QuantumState::to_mixed() const {
  if (!pure_) return *this;
  const std::uint64_t d = dim();
  std::vector<cplx> rho(d * d);
  for (std::uint64_t r = 0; r < d; ++r) {
    for (std::uint64_t c = 0; c < d; ++c) rho[(r << width_) | c] = data_[r] * std::conj(data_[c]);
  }
  return {width_, false, std::move(rho)};
}

void QuantumState::check_invariants(double tol) const {
  const double n = norm();
  if (std::abs(n - 1.0) > tol) {
    throw std::runtime_error((pure_ ? "state norm " : "density trace ") + std::to_string(n) +
                             " deviates from 1");
  }
  if (pure_) return;
  const std::uint64_t d = dim();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::uint64_t r = 0; r < d; ++r) {
    for (std::uint64_t c = 0; c < d; ++c) {
      const cplx a = data_[(r << width_) | c];
      if (std::abs(a - std::conj(data_[(c << width_) | r])) > tol) {
        throw std::runtime_error("density matrix is not Hermitian");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::runtime_error("density matrix has a negative eigenvalue");
  }
}

}  // namespace qfs
