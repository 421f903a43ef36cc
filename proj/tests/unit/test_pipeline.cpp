#include <catch_amalgamated.hpp>

#include <cmath>

#include "qfs/oracle.hpp"
#include "qfs/pipeline.hpp"
#include "reference.hpp"
#include "rng.hpp"

using namespace qfs;
using namespace qfs::pipeline;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Problem& problem(int L) {
  static const Problem p4 = Problem::make(4);
  static const Problem p6 = Problem::make(6);
  return L == 4 ? p4 : p6;
}

std::vector<double> optimum(int L, double r) {
  VqeOptions opt;
  opt.polish_gradient = 1e-6;
  return vqe(problem(L).H(r), problem(L).ansatz, r, oracle::ground_energy_reduced(L, r), opt).theta_opt;
}

HessianResult hessian_of(const Eigen::MatrixXd& m) {
  return {m, Eigen::MatrixXd::Zero(m.rows(), m.cols())};
}

GradientResult gradient_of(std::vector<double> g) {
  return {g, std::vector<double>(g.size(), 0.0)};
}

Eigen::MatrixXd random_spd(test::Rng& rng, int n) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a * a.transpose() + Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_sym(test::Rng& rng, int n) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a + a.transpose();
}

}  // namespace

TEST_CASE("problem construction") {
  CHECK(problem(4).n_params() == 3);
  CHECK(problem(6).n_params() == 7);
  CHECK(problem(4).ansatz.width() == 2);
  CHECK_THROWS_AS(Problem::make(8), std::invalid_argument);
  CHECK_THROWS(Problem::make(3));
}

TEST_CASE("VQE examples") {
  const auto& p = problem(4);
  const auto r0 = vqe(p.H(0.0), p.ansatz, 0.0, -4.0);
  CHECK(r0.converged);
  CHECK_THAT(r0.energy, WithinAbs(-4.0, 1e-8));
  const double e1 = oracle::ground_energy_reduced(4, 1.0);
  const auto r1 = vqe(p.H(1.0), p.ansatz, 1.0, e1);
  CHECK(r1.converged);
  CHECK_THAT(r1.energy, WithinAbs(e1, 1e-8));
  for (double r : {0.5, 1.0, 1.4}) {
    const double e = oracle::ground_energy_reduced(6, r);
    const auto res = vqe(problem(6).H(r), problem(6).ansatz, r, e);
    CHECK(res.converged);
    CHECK_THAT(res.energy, WithinAbs(e, 1e-6));
  }
}

TEST_CASE("VQE without a reference stops on the gradient") {
  const auto& p = problem(4);
  VqeOptions opt;
  opt.gradient_tolerance = 1e-7;
  const auto res = vqe(p.H(0.8), p.ansatz, 0.8, std::nullopt, opt);
  CHECK(res.converged);
  CHECK_THAT(res.energy, WithinAbs(oracle::ground_energy_reduced(4, 0.8), 1e-8));
}

TEST_CASE("response solve examples") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0, 0, 2;
  const auto s = solve_response(hessian_of(a), gradient_of({1.0, -2.0}));
  CHECK_THAT(s.dtheta_dr[0], WithinAbs(-0.5, 1e-15));
  CHECK_THAT(s.dtheta_dr[1], WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.condition_number, WithinAbs(1.0, 1e-15));
  CHECK_FALSE(s.truncated);
  CHECK(s.rank == 2);

  const auto z = solve_response(hessian_of(Eigen::MatrixXd::Identity(3, 3)), gradient_of({0, 0, 0}));
  for (double x : z.dtheta_dr) CHECK(x == 0.0);
  CHECK(z.condition_number == 1.0);
}

TEST_CASE("response solve truncates singular directions") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, 0, 1e-12;
  const auto s = solve_response(hessian_of(a), gradient_of({1.0, 1.0}));
  CHECK(s.truncated);
  CHECK(s.rank == 1);
  CHECK_THAT(s.dtheta_dr[0], WithinAbs(-1.0, 1e-15));
  CHECK(s.dtheta_dr[1] == 0.0);
}

TEST_CASE("response solve on random systems") {
  test::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng.index(7);
    const auto a = random_spd(rng, n);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (auto& v : g) v = rng.normal();
    const auto s = solve_response(hessian_of(a), gradient_of(g));
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(s.dtheta_dr.data(), n);
    const Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), n);
    CHECK((a * x + gv).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(s.residual_norm < 1e-9);
    // d2E = g.x = -g^T A^-1 g <= 0 for a positive definite Hessian
    CHECK(second_energy_derivative(gradient_of(g), s) <= 1e-15);
  }
}

TEST_CASE("zero response or zero gradient give zero") {
  Eigen::MatrixXd b(2, 2);
  b << 1, 0.3, 0.3, 2;
  ResponseSolution zero;
  zero.dtheta_dr = {0.0, 0.0};
  CHECK(fidelity_susceptibility(hessian_of(b), zero) == 0.0);
  const auto s = solve_response(hessian_of(Eigen::MatrixXd::Identity(2, 2)), gradient_of({0.0, 0.0}));
  CHECK(second_energy_derivative(gradient_of({0.0, 0.0}), s) == 0.0);
  ResponseSolution x;
  x.dtheta_dr = {1.0, -1.0};
  CHECK_THAT(fidelity_susceptibility(hessian_of(b), x), WithinAbs(0.5 * (1 - 0.6 + 2), 1e-15));
  CHECK_THAT(fidelity_susceptibility(hessian_of(-b), x, 1.0), WithinAbs(2.4, 1e-15));
}

TEST_CASE("delta-method variances match numerical propagation") {
  test::Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + rng.index(4);
    HessianResult a{random_spd(rng, n), Eigen::MatrixXd::Zero(n, n)};
    HessianResult b{random_sym(rng, n), Eigen::MatrixXd::Zero(n, n)};
    GradientResult g{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
    for (auto& v : g.values) v = rng.normal();
    for (auto& v : g.variances) v = rng.uniform(0.01, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        a.variances(i, j) = a.variances(j, i) = rng.uniform(0.01, 1.0);
        b.variances(i, j) = b.variances(j, i) = rng.uniform(0.01, 1.0);
      }
    }
    auto d2e = [&](const HessianResult& aa, const GradientResult& gg) {
      return second_energy_derivative(gg, solve_response(aa, gg));
    };
    auto fs = [&](const HessianResult& aa, const GradientResult& gg, const HessianResult& bb) {
      return fidelity_susceptibility(bb, solve_response(aa, gg));
    };
    // Central differences over each independent input.
    const double h = 1e-6;
    double var_d2e = 0.0, var_fs = 0.0;
    for (int i = 0; i < n; ++i) {
      auto gp = g, gm = g;
      gp.values[static_cast<std::size_t>(i)] += h;
      gm.values[static_cast<std::size_t>(i)] -= h;
      const double dd = (d2e(a, gp) - d2e(a, gm)) / (2 * h);
      const double df = (fs(a, gp, b) - fs(a, gm, b)) / (2 * h);
      var_d2e += dd * dd * g.variances[static_cast<std::size_t>(i)];
      var_fs += df * df * g.variances[static_cast<std::size_t>(i)];
      for (int j = i; j < n; ++j) {
        auto ap = a, am = a, bp = b, bm = b;
        ap.values(i, j) += h;
        am.values(i, j) -= h;
        bp.values(i, j) += h;
        bm.values(i, j) -= h;
        if (i != j) {
          ap.values(j, i) += h;
          am.values(j, i) -= h;
          bp.values(j, i) += h;
          bm.values(j, i) -= h;
        }
        const double da = (d2e(ap, g) - d2e(am, g)) / (2 * h);
        const double dfa = (fs(ap, g, b) - fs(am, g, b)) / (2 * h);
        const double dfb = (fs(a, g, bp) - fs(a, g, bm)) / (2 * h);
        var_d2e += da * da * a.variances(i, j);
        var_fs += dfa * dfa * a.variances(i, j) + dfb * dfb * b.variances(i, j);
      }
    }
    const auto s = solve_response(a, g);
    CHECK_THAT(second_energy_derivative_variance(a, g, s), WithinRel(var_d2e, 1e-5));
    CHECK_THAT(fidelity_susceptibility_variance(a, g, b, s), WithinRel(var_fs, 1e-5));
  }
}

TEST_CASE("exact quantities at r = 0") {
  const auto p = compute_point(problem(4), 0.0, optimum(4, 0.0));
  CHECK_THAT(p.d2E.value, WithinAbs(-2.0, 1e-3));
  CHECK_THAT(p.fs.value, WithinAbs(0.25, 1e-3));
  CHECK_THAT(p.energy.value, WithinAbs(-4.0, 1e-8));
}

TEST_CASE("exact pipeline reproduces the oracle curves") {
  for (int L : {4, 6}) {
    for (double r : r_grid(0.5, 1.4, 0.1)) {
      const auto theta = optimum(L, r);
      const auto p = compute_point(problem(L), r, theta);
      CHECK_THAT(p.d2E.value, WithinAbs(oracle::d2E_finite_difference(L, r), 1e-3));
      CHECK_THAT(p.fs.value, WithinAbs(oracle::fs_spectral(L, r), 1e-4));
      CHECK(p.condition_number < 1e3);
      CHECK_THAT(p.fs_per_site, WithinAbs(p.fs.value / L, 1e-15));
      CHECK_THAT(p.d2E_per_site, WithinAbs(p.d2E.value / L, 1e-15));
      CHECK_THAT(p.energy_per_site, WithinAbs(p.energy.value / L, 1e-15));
      CHECK(overlap_gradient_norm(problem(L), theta) < 1e-6);
    }
  }
}

TEST_CASE("Hellmann-Feynman: <H1> at the optimum is dE/dr") {
  for (int L : {4, 6}) {
    for (double r : {0.5, 0.9, 1.3}) {
      const auto theta = optimum(L, r);
      const double h1 = expectation(run(problem(L).ansatz, theta), problem(L).H1());
      CHECK_THAT(h1, WithinAbs(oracle::dE_finite_difference(L, r), 1e-4));
    }
  }
}

TEST_CASE("susceptibility is method independent without noise") {
  const auto& p = problem(4);
  const auto theta = optimum(4, 1.0);
  ExactEstimator est;
  const auto ref = compute_point(p, 1.0, theta);
  const auto h = hessian_expectation(p.ansatz, theta, p.H(1.0), est);
  const auto g = grad_expectation(p.ansatz, theta, p.H1(), est);
  const auto resp = solve_response(h, g);
  for (auto m : {overlap::Method::compute_uncompute, overlap::Method::hadamard_real, overlap::Method::swap_test}) {
    CHECK_THAT(susceptibility_for_method(p, theta, resp, m, est).value, WithinAbs(ref.fs.value, 1e-10));
  }
}

TEST_CASE("r grid") {
  const auto g = r_grid(0.5, 1.4, 0.1);
  REQUIRE(g.size() == 10);
  CHECK(g.front() == 0.5);
  CHECK_THAT(g.back(), WithinAbs(1.4, 1e-12));
  CHECK(r_grid(1.0, 1.0, 0.1).size() == 1);
  CHECK_THROWS(r_grid(0.0, 1.0, 0.0));
}

TEST_CASE("summarize") {
  const double v[] = {1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.n == 4);
  CHECK_THAT(s.mean, WithinAbs(2.5, 1e-15));
  CHECK_THAT(s.std, WithinAbs(std::sqrt(5.0 / 3.0), 1e-15));
  const double one[] = {7.0};
  CHECK(summarize(one).std == 0.0);
  const double same[] = {0.1 + 0.2, 0.1 + 0.2, 0.1 + 0.2};
  CHECK(summarize(same).std == 0.0);
  CHECK(summarize(same).mean == 0.1 + 0.2);
}

TEST_CASE("estimator kinds") {
  for (auto k : {EstimatorKind::exact, EstimatorKind::sampled, EstimatorKind::noisy, EstimatorKind::mitigated})
    CHECK(parse_estimator(to_string(k)) == k);
  CHECK_THROWS(parse_estimator("quantum"));
  SweepConfig c;
  c.estimator = EstimatorKind::sampled;
  CHECK(effective_noise(c).p2 == 0.0);
  c.estimator = EstimatorKind::noisy;
  CHECK(effective_noise(c).p2 > 0.0);
}

TEST_CASE("sweep is deterministic and independent of the thread count") {
  SweepConfig c;
  c.L = 4;
  c.r_values = {0.7, 1.1};
  c.trials = 6;
  c.shots = 2048;
  c.seed = 99;
  c.jobs = 1;
  const auto a = sweep(c);
  c.jobs = 4;
  const auto b = sweep(c);
  REQUIRE(a.trials.size() == 12);
  REQUIRE(b.trials.size() == 12);
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].seed == b.trials[i].seed);
    CHECK(a.trials[i].seed == derive_seed(99, {static_cast<std::uint64_t>(a.trials[i].r_index),
                                               static_cast<std::uint64_t>(a.trials[i].trial)}));
    CHECK(a.trials[i].cell.d2E == b.trials[i].cell.d2E);
    CHECK(a.trials[i].cell.fs == b.trials[i].cell.fs);
    CHECK(a.trials[i].cell.energy == b.trials[i].cell.energy);
  }
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].fs.mean == b.points[i].fs.mean);
    CHECK(a.points[i].d2E.std == b.points[i].d2E.std);
  }
  c.seed = 100;
  CHECK(sweep(c).trials[0].cell.fs.value != a.trials[0].cell.fs.value);
}

TEST_CASE("exact sweep has zero spread and matches the oracle") {
  SweepConfig c;
  c.L = 4;
  c.r_values = {0.6, 1.0};
  c.trials = 3;
  c.estimator = EstimatorKind::exact;
  const auto res = sweep(c);
  for (const auto& pt : res.points) {
    CHECK(pt.fs.std == 0.0);
    CHECK(pt.d2E.std == 0.0);
    CHECK_FALSE(pt.flagged);
    CHECK(pt.vqe.converged);
    CHECK_THAT(pt.fs.mean, WithinAbs(pt.exact_fs, 1e-4));
    CHECK_THAT(pt.d2E.mean, WithinAbs(pt.exact_d2E, 1e-3));
    CHECK_THAT(pt.exact_fs, WithinAbs(oracle::fs_spectral(4, pt.r), 1e-12));
  }
}

TEST_CASE("sampled sweep scatters around the oracle") {
  SweepConfig c;
  c.L = 4;
  c.r_values = {0.9};
  c.trials = 20;
  c.seed = 5;
  const auto pt = sweep(c).points.at(0);
  CHECK(pt.fs.std > 0.0);
  CHECK(std::abs(pt.fs.mean - pt.exact_fs) < 4 * pt.fs.std / std::sqrt(20.0));
  CHECK(std::abs(pt.d2E.mean - pt.exact_d2E) < 4 * pt.d2E.std / std::sqrt(20.0));
}
