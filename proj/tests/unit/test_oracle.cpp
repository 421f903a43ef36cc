#include <catch_amalgamated.hpp>

#include <cmath>

#include "qfs/oracle.hpp"
#include "qfs/tfim.hpp"
#include "reference.hpp"

using namespace qfs;
using namespace qfs::oracle;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> grid() {
  std::vector<double> r;
  for (int k = 0; k <= 9; ++k) r.push_back(0.5 + 0.1 * k);
  return r;
}

// Per-site values on the default grid, from an independent numpy
// diagonalization of the full chain (5 significant digits).
const double kFsPerSite4[] = {0.11419, 0.12586, 0.13006, 0.12486, 0.11157, 0.09375, 0.07518, 0.05844, 0.04462, 0.03381};
const double kD2ePerSite4[] = {-0.71629, -0.75962, -0.77101, -0.74338, -0.68112, -0.59724, -0.5065, -0.42011, -0.3441, -0.28042};
const double kFsPerSite6[] = {0.09964, 0.12557, 0.1554, 0.17763, 0.17877, 0.15625, 0.12131, 0.0872, 0.0604, 0.04149};
const double kD2ePerSite6[] = {-0.61583, -0.69129, -0.7719, -0.82415, -0.81244, -0.73022, -0.6068, -0.47947, -0.37029, -0.285};

void check_spectral(const Eigen::MatrixXd& m, const SpectralData& s) {
  const auto n = m.rows();
  CHECK((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index k = 0; k < n; ++k) {
    CHECK((m * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k)).cwiseAbs().maxCoeff() < 1e-9);
    if (k > 0) CHECK(s.eigenvalues(k - 1) <= s.eigenvalues(k));
    Eigen::Index arg = 0;
    s.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(s.eigenvectors(arg, k) > 0);
  }
}

}  // namespace

TEST_CASE("diagonalize: reduced L = 4 matrix at r = 0") {
  const auto s = diagonalize(reduced_matrix(4, 0.0));
  const double expect[] = {-4, 0, 0, 4};
  for (int k = 0; k < 4; ++k) CHECK_THAT(s.eigenvalues(k), WithinAbs(expect[k], 1e-12));
  check_spectral(reduced_matrix(4, 0.0), s);
}

TEST_CASE("diagonalize: 1x1 and asymmetric input") {
  Eigen::MatrixXd one(1, 1);
  one << 2.5;
  const auto s = diagonalize(one);
  CHECK(s.eigenvalues(0) == 2.5);
  CHECK(s.eigenvectors(0, 0) == 1.0);
  Eigen::Matrix2d a;
  a << 0, 1, 2, 0;
  CHECK_THROWS(diagonalize(a));
}

TEST_CASE("diagonalize: random and degenerate symmetric matrices") {
  test::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + rng.index(10);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) q(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    const Eigen::MatrixXd Q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = static_cast<double>(rng.index(3));
    const Eigen::MatrixXd m = Q * d.asDiagonal() * Q.transpose();
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    check_spectral(sym, diagonalize(sym));
  }
}

TEST_CASE("reduced and full ground energies agree") {
  for (int L : {2, 4, 6}) {
    for (double r : grid()) CHECK_THAT(ground_energy_reduced(L, r), WithinAbs(ground_energy_full(L, r), 1e-10));
  }
}

TEST_CASE("ground energy decreases with r") {
  for (int L : {4, 6}) {
    double prev = ground_energy_reduced(L, 0.5);
    for (double r : grid()) {
      if (r == 0.5) continue;
      const double e = ground_energy_reduced(L, r);
      CHECK(e < prev);
      prev = e;
    }
  }
}

TEST_CASE("fs_spectral: limits") {
  CHECK_THAT(fs_spectral(4, 0.0), WithinAbs(0.25, 1e-12));
  CHECK(fs_spectral(4, 100.0) < 1e-3);
  CHECK_THAT(fs_spectral(4, 1.0), WithinAbs(fs_finite_difference(4, 1.0), 1e-6));
  CHECK_THROWS(fs_spectral(3, 1.0));
}

TEST_CASE("fs_finite_difference: step consistency, sign and the r = 0 value") {
  for (double r : grid()) {
    CHECK_THAT(fs_finite_difference(4, r, 1e-3), WithinAbs(fs_finite_difference(4, r, 1e-4), 1e-4));
    CHECK(fs_finite_difference_signed(4, r) <= 0.0);
  }
  CHECK_THAT(fs_finite_difference(4, 0.0), WithinAbs(0.25, 1e-4));
  CHECK_THROWS(fs_finite_difference(4, 1.0, 1e-5));
  CHECK_THROWS(fs_finite_difference(4, 1.0, 0.1));
}

TEST_CASE("fs_spectral agrees with the finite-difference oracle on the grid") {
  for (int L : {4, 6}) {
    for (double r : grid()) CHECK_THAT(fs_spectral(L, r), WithinAbs(fs_finite_difference(L, r), 1e-5));
  }
}

TEST_CASE("fs_spectral in the reduced basis matches the full chain at L = 4") {
  // Full-basis spectral sum with H1 = -sum Z.
  const Eigen::MatrixXd h1 = test::observable_matrix(tfim::full_tfim(4).part(Partition::H1)).real();
  for (double r : {0.5, 1.0, 1.4}) {
    const auto s = diagonalize(full_matrix(4, r));
    const Eigen::VectorXd g = s.eigenvectors.col(0);
    double acc = 0.0;
    for (Eigen::Index n = 1; n < s.eigenvalues.size(); ++n) {
      const double gap = s.eigenvalues(n) - s.eigenvalues(0);
      if (gap < kGapThreshold) continue;
      const double m = s.eigenvectors.col(n).dot(h1 * g);
      acc += m * m / (gap * gap);
    }
    CHECK_THAT(fs_spectral(4, r), WithinAbs(acc, 1e-10));
  }
}

TEST_CASE("d2E_finite_difference") {
  CHECK_THAT(d2E_finite_difference(4, 0.0), WithinAbs(-2.0, 1e-3));
  auto linear = [](double r) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 0) = -r;
    m(1, 1) = r;
    m(2, 2) = 5.0;
    return m;
  };
  CHECK_THAT(d2E_finite_difference(linear, 0.7), WithinAbs(0.0, 1e-9));
  CHECK_THAT(dE_finite_difference(linear, 0.7), WithinAbs(-1.0, 1e-9));
}

TEST_CASE("frozen per-site reference curves") {
  const auto rs = grid();
  for (std::size_t k = 0; k < rs.size(); ++k) {
    CHECK_THAT(fs_spectral(4, rs[k]) / 4, WithinAbs(kFsPerSite4[k], 1e-5));
    CHECK_THAT(d2E_finite_difference(4, rs[k]) / 4, WithinAbs(kD2ePerSite4[k], 1e-5));
    CHECK_THAT(fs_spectral(6, rs[k]) / 6, WithinAbs(kFsPerSite6[k], 1e-5));
    CHECK_THAT(d2E_finite_difference(6, rs[k]) / 6, WithinAbs(kD2ePerSite6[k], 1e-5));
  }
}
