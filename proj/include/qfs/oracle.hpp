#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qfs::oracle {

inline constexpr int kMaxDim = 4096;
inline constexpr double kGapThreshold = 1e-9;

struct SpectralData {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  double r = 0.0;
};

/// Full symmetric eigendecomposition. Degenerate clusters are re-orthonormalized
/// and every eigenvector is signed so its largest-magnitude entry is positive.
SpectralData diagonalize(const Eigen::MatrixXd& m, double r = 0.0);

/// Dense real matrix of the full L-site chain at field r.
Eigen::MatrixXd full_matrix(int L, double r);
/// Reduced (translation-orbit) matrix at field r.
Eigen::MatrixXd reduced_matrix(int L, double r);

double ground_energy_full(int L, double r);
double ground_energy_reduced(int L, double r);

/// sum_{n>0} |<n|H1|0>|^2 / (E0 - En)^2 in the reduced basis.
double fs_spectral(int L, double r);

/// (F(r, d) + F(r, -d) - 2) / d^2 with F = |<psi0(r)|psi0(r+d)>|; <= 0.
double fs_finite_difference_signed(int L, double r, double delta = 1e-3);
/// Absolute value of the signed form.
double fs_finite_difference(int L, double r, double delta = 1e-3);

/// Central differences of the lowest eigenvalue of h(r).
double d2E_finite_difference(const std::function<Eigen::MatrixXd(double)>& h, double r, double step = 1e-3);
double dE_finite_difference(const std::function<Eigen::MatrixXd(double)>& h, double r, double step = 1e-3);
double d2E_finite_difference(int L, double r, double step = 1e-3);
double dE_finite_difference(int L, double r, double step = 1e-3);

}  // namespace qfs::oracle
