#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qfs/ansatz.hpp"
#include "qfs/autodiff/derivatives.hpp"
#include "qfs/oracle.hpp"
#include "qfs/overlap.hpp"
#include "qfs/pipeline.hpp"
#include "reference.hpp"

using namespace qfs;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

Circuit cos_circuit() {
  Circuit c(1, 1);
  c.ry(0, Angle::symbol(0));
  return c;
}

PauliObservable z1() {
  PauliObservable o(1);
  o.add(1.0, PauliString("Z"));
  return o;
}

test::Scalar energy_of(const Circuit& c, const PauliObservable& obs) {
  return [&c, &obs](std::span<const double> p) { return test::reference_expectation(c, p, obs); };
}

}  // namespace

TEST_CASE("gradient of cos(theta) at pi/3") {
  ExactEstimator est;
  const std::vector<double> p{pi / 3};
  const auto g = grad_expectation(cos_circuit(), p, z1(), est);
  REQUIRE(g.values.size() == 1);
  CHECK_THAT(g.values[0], WithinAbs(-std::sin(pi / 3), 1e-15));
  CHECK(g.variances[0] == 0.0);
}

TEST_CASE("second derivative of cos(theta) at pi/3 uses the two-term diagonal rule") {
  ExactEstimator est;
  const std::vector<double> p{pi / 3};
  const auto h = hessian_expectation(cos_circuit(), p, z1(), est);
  CHECK_THAT(h.values(0, 0), WithinAbs(-0.5, 1e-15));
}

TEST_CASE("shift rules match finite differences on random circuits") {
  test::Rng rng(20240601);
  ExactEstimator est;
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 1 + rng.index(3);
    const int n = 1 + rng.index(7);
    const auto c = test::random_circuit(rng, w, n, 4 + rng.index(10));
    const auto obs = test::random_observable(rng, w, 1 + rng.index(5));
    const auto p = rng.angles(n);
    const auto f = energy_of(c, obs);
    const auto g = grad_expectation(c, p, obs, est);
    const auto fd = test::fd_gradient(f, p);
    for (int i = 0; i < n; ++i) CHECK_THAT(g.values[static_cast<std::size_t>(i)], WithinAbs(fd[static_cast<std::size_t>(i)], 1e-5));
    const auto h = hessian_expectation(c, p, obs, est);
    const auto fh = test::fd_hessian(f, p);
    CHECK((h.values - fh).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("probability derivatives match finite differences") {
  test::Rng rng(8080);
  ExactEstimator est;
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + rng.index(3);
    const int n = 1 + rng.index(4);
    const auto c = test::random_circuit(rng, w, n, 8);
    const auto p = rng.angles(n);
    auto f = [&](std::span<const double> x) { return test::reference_all_zeros(c, x); };
    const auto g = grad_probability(c, p, est);
    const auto fd = test::fd_gradient(f, p);
    for (int i = 0; i < n; ++i) CHECK_THAT(g.values[static_cast<std::size_t>(i)], WithinAbs(fd[static_cast<std::size_t>(i)], 1e-5));
    CHECK((hessian_probability(c, p, est).values - test::fd_hessian(f, p)).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("Hessian is symmetric bit for bit") {
  test::Rng rng(44);
  SampledEstimator est(1000, NoiseModel::device_default(), 5);
  const auto c = test::random_circuit(rng, 3, 5, 10);
  const auto obs = test::random_observable(rng, 3, 4);
  const auto h = hessian_expectation(c, rng.angles(5), obs, est);
  CHECK(h.values == h.values.transpose());
  CHECK(h.variances == h.variances.transpose());
}

TEST_CASE("gradient is linear in the observable") {
  test::Rng rng(45);
  ExactEstimator est;
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = test::random_circuit(rng, 2, 3, 8);
    const auto p = rng.angles(3);
    const auto a = test::random_observable(rng, 2, 3);
    const auto b = test::random_observable(rng, 2, 3);
    const double alpha = rng.uniform(-2, 2);
    const double beta = rng.uniform(-2, 2);
    PauliObservable sum(2);
    for (const auto& t : a.terms()) sum.add(alpha * t.coeff, t.string, t.partition);
    for (const auto& t : b.terms()) sum.add(beta * t.coeff, t.string, t.partition);
    const auto ga = grad_expectation(c, p, a, est);
    const auto gb = grad_expectation(c, p, b, est);
    const auto gs = grad_expectation(c, p, sum, est);
    for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(gs.values[i], WithinAbs(alpha * ga.values[i] + beta * gb.values[i], 1e-12));
  }
}

TEST_CASE("gradient vanishes at the VQE minimum") {
  const auto problem = pipeline::Problem::make(4);
  pipeline::VqeOptions opts;
  opts.polish_gradient = 1e-6;
  ExactEstimator est;
  for (double r : {0.5, 1.0, 1.4}) {
    const auto v = pipeline::vqe(problem.observable, problem.ansatz, r, oracle::ground_energy_reduced(4, r), opts);
    REQUIRE(v.converged);
    const auto g = grad_expectation(problem.ansatz, v.theta_opt, problem.H(r), est);
    for (double x : g.values) CHECK(std::abs(x) < 1e-5);
  }
}

TEST_CASE("overlap probability: zero gradient and twice the overlap Hessian at coincidence") {
  test::Rng rng(46);
  ExactEstimator est;
  for (int n : {2, 3}) {
    const auto a = ansatz::build_ansatz(n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto theta = rng.angles(a.n_params());
      const overlap::OverlapJob job{a.bound(theta), a, overlap::Method::compute_uncompute};
      const auto g = overlap::overlap_gradient(job, theta, est);
      for (double x : g.values) CHECK(std::abs(x) < 1e-12);
      const auto h = overlap::overlap_hessian(job, theta, est);
      const auto psi0 = test::reference_state(a, theta);
      auto ov = [&](std::span<const double> x) { return psi0.dot(test::reference_state(a, x)).real(); };
      const Eigen::MatrixXd oh = test::fd_hessian(ov, theta);
      CHECK((h.values - 2.0 * oh).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("sampled gradient variance is a quarter of the summed shift variances") {
  test::Rng rng(47);
  const auto c = test::random_circuit(rng, 2, 3, 6);
  const auto p = rng.angles(3);
  const auto obs = test::random_observable(rng, 2, 3);
  const Transform ts[] = {transform::Expand::observable(obs), transform::Differentiate{DiffOrder::gradient}};
  const auto batch = compose(c, p, ts);
  SampledEstimator est(4096, {}, 9);
  const auto raw = est.evaluate(batch.jobs);
  const auto g = to_gradient(batch, batch.recombine(raw));
  for (std::size_t i = 0; i < 3; ++i) {
    double var = 0.0;
    for (const auto& [job, coeff] : batch.outputs[i]) var += coeff * coeff * raw[job].variance;
    CHECK(g.variances[i] == var);
  }
}

TEST_CASE("sampled gradient variance of a single rotation is (s+^2 + s-^2) / 4") {
  const auto c = cos_circuit();
  const std::vector<double> p{0.7};
  SampledEstimator est(2048, {}, 10);
  const auto g = grad_expectation(c, p, z1(), est);
  SampledEstimator replay(2048, {}, 10);
  const auto sc = std::make_shared<const Circuit>(c);
  std::vector<Job> jobs;
  for (double d : {pi / 2, -pi / 2}) jobs.push_back({std::make_shared<const Circuit>(c.shifted(0, d)), {0.7}, Measurement::of(PauliString("Z"))});
  const auto raw = replay.evaluate(jobs);
  CHECK_THAT(g.variances[0], WithinAbs(0.25 * (raw[0].variance + raw[1].variance), 1e-18));
  CHECK_THAT(std::abs(g.values[0]), WithinAbs(0.5 * std::abs(raw[0].value - raw[1].value), 1e-15));
}

TEST_CASE("compose: expansion only") {
  PauliObservable obs(2);
  obs.add(0.5, PauliString("ZZ")).add(-1.5, PauliString("XI")).add(2.0, PauliString("YY"), Partition::H1);
  Circuit c(2, 1);
  c.ry(0, Angle::symbol(0)).cnot(0, 1);
  const std::vector<double> p{0.4};
  const Transform ts[] = {transform::Expand::observable(obs)};
  const auto batch = compose(c, p, ts);
  CHECK(batch.jobs.size() == 3);
  CHECK(batch.circuit_count() == 1);
  REQUIRE(batch.outputs.size() == 1);
  ExactEstimator est;
  const auto out = execute(batch, est);
  CHECK_THAT(out[0].value, WithinAbs(expectation_exact(c, p, obs), 1e-14));
}

TEST_CASE("compose: expansion, gradient and folding multiply job counts") {
  const auto a = ansatz::build_ansatz(2);
  const auto obs = pipeline::Problem::make(4).H(1.0);
  const std::vector<double> p{0.1, 0.2, 0.3};
  transform::Fold fold{{1, 3, 5}, {1.875, -1.25, 0.375}, [](const Circuit& c, int) { return c; }};
  const Transform ts[] = {transform::Expand::observable(obs), transform::Differentiate{DiffOrder::gradient}, fold};
  const auto batch = compose(a, p, ts);
  CHECK(batch.jobs.size() == obs.size() * 2 * 3 * 3);
}

TEST_CASE("compose: rejects incompatible orderings") {
  const auto a = ansatz::build_ansatz(2);
  const std::vector<double> p{0.1, 0.2, 0.3};
  transform::Fold fold{{1}, {1.0}, [](const Circuit& c, int) { return c; }};
  const Transform no_expand[] = {transform::Differentiate{}};
  const Transform late_expand[] = {transform::Expand::all_zeros(), transform::Differentiate{}, transform::Expand::all_zeros()};
  const Transform twice[] = {transform::Expand::all_zeros(), transform::Differentiate{}, transform::Differentiate{}};
  const Transform fold_twice[] = {transform::Expand::all_zeros(), fold, fold};
  CHECK_THROWS(compose(a, p, no_expand));
  CHECK_THROWS(compose(a, p, late_expand));
  CHECK_THROWS(compose(a, p, twice));
  CHECK_THROWS(compose(a, p, fold_twice));
  const std::vector<double> short_p{0.1};
  const Transform ok[] = {transform::Expand::all_zeros()};
  CHECK_THROWS(compose(a, short_p, ok));
}

TEST_CASE("circuit-count accounting") {
  CHECK(shift_circuit_count(3, DiffOrder::gradient) == 6);
  CHECK(shift_circuit_count(3, DiffOrder::hessian) == 3 + 1 + 4 * 3);
  CHECK(shift_circuit_count(7, DiffOrder::hessian) == 7 + 1 + 4 * 21);
  for (int n : {2, 3}) {
    const auto a = ansatz::build_ansatz(n);
    const std::vector<double> p(static_cast<std::size_t>(a.n_params()), 0.3);
    for (auto order : {DiffOrder::gradient, DiffOrder::hessian}) {
      const Transform ts[] = {transform::Expand::all_zeros(), transform::Differentiate{order}};
      CHECK(compose(a, p, ts).circuit_count() == shift_circuit_count(a.n_params(), order));
    }
  }
}

TEST_CASE("hessian_index enumerates the upper triangle row-major") {
  std::size_t k = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i; j < 5; ++j) {
      CHECK(hessian_index(5, i, j) == k);
      CHECK(hessian_index(5, j, i) == k);
      ++k;
    }
  }
}

TEST_CASE("estimators: exact estimates carry zero shots and variance") {
  test::Rng rng(48);
  const auto c = std::make_shared<const Circuit>(test::random_circuit(rng, 2, 1, 5));
  ExactEstimator est;
  const auto e = est.evaluate_one({c, {0.3}, Measurement::of(PauliString("ZX"))});
  CHECK(e.shots == 0);
  CHECK(e.variance == 0.0);
  SampledEstimator s(256, {}, 1);
  const auto f = s.evaluate_one({c, {0.3}, Measurement::all_zeros()});
  CHECK(f.shots == 256);
}
