#include <doctest.h>

#include "grid_oracle.hpp"
#include "irs/phase.hpp"
#include "irs/transceiver.hpp"
#include "test_util.hpp"

using namespace irs;
using irs::testing::random_beam;
using irs::testing::random_estimate;
using irs::testing::random_unit_modulus;

namespace {

PhaseSubproblem<double> random_subproblem(int n, Rng& rng) {
  const auto est = random_estimate(3, n, rng);
  const CVector<double> w = random_beam(3, 1.0, rng);
  return build_subproblem<double>(est, w, rng.complex_normal<double>());
}

// Objective written with Theta, term by term.
double theta_objective(const ChannelEstimate<double>& est, const CVector<double>& w,
                       Complex<double> c, const PhaseVector<double>& phases) {
  const CMatrix<double> theta = phases.diagonal().asDiagonal();
  const CMatrix<double> ww = w * w.adjoint();
  const CMatrix<double>& G = est.G;
  const CVector<double>& hr = est.h_r;
  const CVector<double>& hd = est.h_d;
  const Complex<double> quad = (hr.adjoint() * theta * G * ww * G.adjoint() * theta.adjoint() * hr)(0, 0) +
                               (hd.adjoint() * ww * G.adjoint() * theta.adjoint() * hr)(0, 0) +
                               (hr.adjoint() * theta * G * ww * hd)(0, 0);
  const Complex<double> lin = (hr.adjoint() * theta * G * w)(0, 0) * c;
  return (quad * std::norm(c)).real() - 2.0 * lin.real();
}

}  // namespace

TEST_CASE("degenerate subproblem for a zero transceiver") {
  Rng rng(41);
  const auto est = random_estimate(3, 5, rng);
  const auto sub_w = build_subproblem<double>(est, CVector<double>::Zero(3), Complex<double>(1.0));
  CHECK(sub_w.Phi.isZero(0.0));
  CHECK(sub_w.Q.isZero(0.0));
  CHECK(sub_w.q.isZero(0.0));
  const auto sub_c = build_subproblem<double>(est, random_beam(3, 1.0, rng), Complex<double>(0.0));
  CHECK(sub_c.Phi.isZero(0.0));
  CHECK(sub_c.q.isZero(0.0));
}

TEST_CASE("scalar subproblem") {
  const ChannelEstimate<double> est{CMatrix<double>::Ones(1, 1), CVector<double>::Ones(1),
                                    CVector<double>::Ones(1)};
  const auto sub = build_subproblem<double>(est, CVector<double>::Ones(1), Complex<double>(1.0));
  CHECK(sub.Phi(0) == Complex<double>(1.0));
  CHECK(sub.d == Complex<double>(1.0));
  CHECK(sub.Q(0, 0) == Complex<double>(1.0));
  CHECK(sub.q(0) == Complex<double>(0.0));
}

TEST_CASE("subproblem rejects bad shapes") {
  Rng rng(42);
  const auto est = random_estimate(3, 4, rng);
  CHECK_THROWS_AS(build_subproblem<double>(est, CVector<double>::Ones(2), Complex<double>(1.0)), std::invalid_argument);
  const auto none = random_estimate(3, 0, rng);
  CHECK_THROWS_AS(build_subproblem<double>(none, CVector<double>::Ones(3), Complex<double>(1.0)), std::invalid_argument);
}

TEST_CASE("reflection-vector objective equals the Theta objective") {
  Rng rng(43);
  const int n = 6;
  const auto est = random_estimate(3, n, rng);
  const CVector<double> w = random_beam(3, 1.0, rng);
  const Complex<double> c = rng.complex_normal<double>();
  const auto sub = build_subproblem<double>(est, w, c);
  const ErrorStats<double> errs{0.03, 0.05, 0.02};
  double offset = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto phases = PhaseVector<double>::random(n, rng);
    const double f = phase_objective(sub, phases);
    CHECK(f == doctest::Approx(theta_objective(est, w, c, phases)).epsilon(1e-12));
    // The full averaged MSE differs from f by a phase-independent amount that
    // contains |d|^2 - 2 Re(d).
    const double mse = evaluate_mse(build_quadratic(est, errs, phases, 0.1), w, c);
    if (trial == 0) offset = mse - f;
    CHECK(mse - f == doctest::Approx(offset).epsilon(1e-10));
  }
  const auto q0 = build_quadratic(est, errs, PhaseVector<double>::zeros(n), 0.1);
  const CMatrix<double> residual = q0.A - q0.alpha * q0.alpha.adjoint();
  const double expected = std::norm(sub.d) - 2.0 * sub.d.real() +
                          std::norm(c) * ((w.adjoint() * residual * w)(0, 0).real() + 0.1) + 1.0;
  CHECK(offset == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("largest eigenvalue of the rank-one Q") {
  PhaseSubproblem<double> sub;
  sub.Phi = CVector<double>::Zero(3);
  CHECK(lambda_max_rank1(sub) == 0.0);
  sub.Phi = CVector<double>(2);
  sub.Phi << Complex<double>(1, 0), Complex<double>(0, 1);
  CHECK(lambda_max_rank1(sub) == 2.0);

  Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_subproblem(2 + trial, rng);
    const double eig = Eigen::SelfAdjointEigenSolver<CMatrix<double>>(s.Q).eigenvalues().maxCoeff();
    CHECK(lambda_max_rank1(s) == doctest::Approx(eig).epsilon(1e-10));
  }
}

TEST_CASE("single element: the update aligns v with q") {
  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sub = random_subproblem(1, rng);
    const auto r = mm_iterate(sub, PhaseVector<double>::random(1, rng));
    const CVector<double> v = r.phases.reflection();
    const Complex<double> expected = std::polar(1.0, std::arg(sub.q(0)));
    CHECK(std::abs(v(0) - expected) < 1e-12);
    // Maximizes Re(conj(v) q) over the unit circle.
    CHECK(std::real(std::conj(v(0)) * sub.q(0)) == doctest::Approx(std::abs(sub.q(0))).epsilon(1e-12));
  }
}

TEST_CASE("zero subproblem leaves the phases unchanged") {
  PhaseSubproblem<double> sub;
  sub.Phi = CVector<double>::Zero(4);
  sub.Q = CMatrix<double>::Zero(4, 4);
  sub.q = CVector<double>::Zero(4);
  Rng rng(46);
  const auto start = PhaseVector<double>::random(4, rng);
  const auto r = mm_iterate(sub, start);
  CHECK(r.phases.theta().isApprox(start.theta(), 1e-15));
  CHECK(r.converged);
}

TEST_CASE("two elements: MM fixed point matches exhaustive grid search") {
  Rng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sub = random_subproblem(2, rng);
    const auto grid = testing::grid_minimum(sub.Q, sub.q, 1e-3);
    const auto from_grid = mm_iterate(sub, PhaseVector<double>(grid.theta));
    const double f = from_grid.objective.back();
    CHECK(f >= grid.value - 1e-6);
    CHECK(f <= grid.value + 1e-6);
    const auto from_random = mm_iterate(sub, PhaseVector<double>::random(2, rng));
    CHECK(from_random.objective.back() >= grid.value - 1e-6);
  }
}

TEST_CASE("surrogate majorizes the objective and touches it at the anchor") {
  Rng rng(48);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    const auto sub = random_subproblem(n, rng);
    const CVector<double> vk = random_unit_modulus(n, rng);
    const CVector<double> v = random_unit_modulus(n, rng);
    CHECK(phase_surrogate(sub, v, vk) >= phase_objective(sub, v) - 1e-10);
    CHECK(phase_surrogate(sub, vk, vk) == doctest::Approx(phase_objective(sub, vk)).epsilon(1e-12));
    // H - Q is PSD, so domination also holds off the unit torus.
    const CVector<double> z = rng.complex_normal_vector<double>(n);
    CHECK(phase_surrogate(sub, z, vk) >= phase_objective(sub, z) - 1e-10);
  }
}

TEST_CASE("MM descent, unit modulus and fixed points") {
  Rng rng(49);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 30;
    const auto sub = random_subproblem(n, rng);
    const auto start = PhaseVector<double>::random(n, rng);
    const auto r = mm_iterate(sub, start);
    for (std::size_t k = 1; k < r.objective.size(); ++k)
      CHECK(r.objective[k] <= r.objective[k - 1] + 1e-12);
    CHECK(r.objective.back() <= phase_objective(sub, start) + 1e-12);
    const CVector<double> v = r.phases.reflection();
    CHECK((v.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("an exact fixed point of the update map is stationary") {
  Rng rng(50);
  {
    // N = 1: one update reaches the fixed point exactly.
    const auto sub = random_subproblem(1, rng);
    const CVector<double> v1 = mm_update(sub, random_unit_modulus(1, rng));
    CHECK(std::abs(mm_update(sub, v1)(0) - v1(0)) < 1e-15);
  }
  for (int trial = 0; trial < 20; ++trial) {
    // Choose q so that u = -r o v with r > 0, i.e. v = -exp(j arg u).
    const int n = 2 + trial;
    auto sub = random_subproblem(n, rng);
    const CVector<double> v = random_unit_modulus(n, rng);
    CVector<double> r(n);
    for (int i = 0; i < n; ++i) r(i) = rng.uniform(0.1, 2.0);
    sub.q = sub.Q * v - lambda_max_rank1(sub) * v + r.cwiseProduct(v);
    CHECK((mm_update(sub, v) - v).cwiseAbs().maxCoeff() < 1e-14);
    const auto res = mm_iterate(sub, PhaseVector<double>::from_reflection(v));
    CHECK(res.iterations == 1);
    CHECK(std::abs(res.objective[1] - res.objective[0]) < 1e-12);
  }
}

TEST_CASE("iteration cap is reported") {
  Rng rng(51);
  const auto sub = random_subproblem(20, rng);
  const auto r = mm_iterate(sub, PhaseVector<double>::random(20, rng), MmConfig{0.0, 3});
  CHECK(r.iterations == 3);
  CHECK_FALSE(r.converged);
  CHECK(r.objective.size() == 4);
}
