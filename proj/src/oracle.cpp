#include "qfs/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qfs/tfim.hpp"

namespace qfs::oracle {

namespace {

void check_delta(double delta) {
  if (!(delta >= 1e-4 && delta <= 1e-2)) throw std::invalid_argument("delta must lie in [1e-4, 1e-2]");
}

Eigen::VectorXd ground_state(int L, double r) {
  const auto s = diagonalize(reduced_matrix(L, r), r);
  if (s.eigenvalues.size() > 1 && s.eigenvalues(1) - s.eigenvalues(0) < kGapThreshold) {
    throw std::runtime_error("degenerate ground state at r = " + std::to_string(r));
  }
  return s.eigenvectors.col(0);
}

}  // namespace

SpectralData diagonalize(const Eigen::MatrixXd& m, double r) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square and non-empty");
  if (m.rows() > kMaxDim) throw std::invalid_argument("matrix dimension exceeds " + std::to_string(kMaxDim));
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  SpectralData d{es.eigenvalues(), es.eigenvectors(), r};
  const Eigen::Index n = d.eigenvalues.size();
  const double scale = std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
  // Modified Gram-Schmidt inside each degenerate cluster.
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && d.eigenvalues(end) - d.eigenvalues(end - 1) < kGapThreshold * scale) ++end;
    for (Eigen::Index k = start; k < end; ++k) {
      for (Eigen::Index j = start; j < k; ++j) {
        d.eigenvectors.col(k) -= d.eigenvectors.col(j).dot(d.eigenvectors.col(k)) * d.eigenvectors.col(j);
      }
      d.eigenvectors.col(k).normalize();
    }
    start = end;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    d.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (d.eigenvectors(arg, k) < 0) d.eigenvectors.col(k) *= -1.0;
  }
  return d;
}

Eigen::MatrixXd full_matrix(int L, double r) {
  const auto dense = tfim::full_tfim(L).dense(r);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << L);
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = dense[static_cast<std::size_t>(i * dim + j)].real();
  }
  return m;
}

Eigen::MatrixXd reduced_matrix(int L, double r) { return tfim::reduce(L).at(r); }

double ground_energy_full(int L, double r) { return diagonalize(full_matrix(L, r), r).eigenvalues(0); }

double ground_energy_reduced(int L, double r) { return diagonalize(reduced_matrix(L, r), r).eigenvalues(0); }

double fs_spectral(int L, double r) {
  const auto h = tfim::reduce(L);
  const auto s = diagonalize(h.at(r), r);
  const Eigen::VectorXd v0 = s.eigenvectors.col(0);
  const Eigen::VectorXd h1v0 = h.H1 * v0;
  double acc = 0.0;
  for (Eigen::Index n = 1; n < s.eigenvalues.size(); ++n) {
    const double gap = s.eigenvalues(n) - s.eigenvalues(0);
    if (gap < kGapThreshold) {
      if (n == 1) throw std::runtime_error("ground state is degenerate at r = " + std::to_string(r));
      continue;
    }
    const double me = s.eigenvectors.col(n).dot(h1v0);
    acc += me * me / (gap * gap);
  }
  return acc;
}

double fs_finite_difference_signed(int L, double r, double delta) {
  check_delta(delta);
  const auto v0 = ground_state(L, r);
  const double fp = std::abs(v0.dot(ground_state(L, r + delta)));
  const double fm = std::abs(v0.dot(ground_state(L, r - delta)));
  return (fp + fm - 2.0) / (delta * delta);
}

double fs_finite_difference(int L, double r, double delta) {
  return std::abs(fs_finite_difference_signed(L, r, delta));
}

double d2E_finite_difference(const std::function<Eigen::MatrixXd(double)>& h, double r, double step) {
  auto e0 = [&](double x) { return diagonalize(h(x), x).eigenvalues(0); };
  return (e0(r + step) - 2.0 * e0(r) + e0(r - step)) / (step * step);
}

double dE_finite_difference(const std::function<Eigen::MatrixXd(double)>& h, double r, double step) {
  auto e0 = [&](double x) { return diagonalize(h(x), x).eigenvalues(0); };
  return (e0(r + step) - e0(r - step)) / (2.0 * step);
}

double d2E_finite_difference(int L, double r, double step) {
  const auto h = tfim::reduce(L);
  return d2E_finite_difference([&](double x) { return h.at(x); }, r, step);
}

double dE_finite_difference(int L, double r, double step) {
  const auto h = tfim::reduce(L);
  return dE_finite_difference([&](double x) { return h.at(x); }, r, step);
}

}  // namespace qfs::oracle
