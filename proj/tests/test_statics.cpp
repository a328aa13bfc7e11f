#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "varmech/statics.hpp"
#include "varmech/systems.hpp"

using namespace varmech;

namespace {

StaticSystem spring(double k, Metric g, Point q0) {
  return make_static_oscillator(HarmonicParams(1.0, k, std::move(g), std::move(q0)));
}

}  // namespace

TEST_CASE("du agrees with the spring force") {
  const StaticSystem sys = spring(1.0, Metric::identity(3), Point::zero(3));
  CHECK(du(sys, Point{1, 0, 0}, Vector{1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(du(sys, Point{1, 0, 0}, Vector::zero(3)) == 0.0);

  // orthogonality: force along e0, direction e1
  const StaticSystem s2 = spring(2.0, Metric::identity(3), Point::zero(3));
  CHECK(du(s2, Point{2, 0, 0}, Vector{0, 1, 0}) == doctest::Approx(0.0));
  // finite-difference oracle
  const double h = 1e-6;
  const Point qa{2, -h, 0}, qb{2, h, 0};
  const double fd = (s2.energy_at(qb) - s2.energy_at(qa)) / (2 * h);
  CHECK(std::abs(du(s2, Point{2, 0, 0}, Vector{0, 1, 0}) - fd) <= 1e-8);
}

TEST_CASE("du is linear in the direction") {
  vmtest::Rng rng(11);
  const StaticSystem sys = spring(1.3, vmtest::random_metric(rng, 3), Point{0.2, -1, 0.5});
  for (int trial = 0; trial < 30; ++trial) {
    const Point q = vmtest::random_point(rng, 3);
    const Vector u = vmtest::random_vector(rng, 3);
    const Vector v = vmtest::random_vector(rng, 3);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    const double lhs = du(sys, q, u * a + v * b);
    const double rhs = a * du(sys, q, u) + b * du(sys, q, v);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("constitutive residual on the spring law") {
  const StaticSystem sys = spring(1.0, Metric::identity(3), Point::zero(3));
  CHECK(constitutive_residual(sys, Point{1, 0, 0}, Covector{1, 0, 0}) <= 1e-15);
  CHECK(constitutive_residual(sys, Point::zero(3), Covector::zero(3)) == 0.0);

  const StaticSystem s3 = spring(3.0, Metric::identity(3), Point::zero(3));
  CHECK(constitutive_residual(s3, Point{1, 1, 0}, Covector::zero(3)) ==
        doctest::Approx(3.0).epsilon(1e-14));

  CHECK(constitutive_member(sys, Point{1, 0, 0}, Covector{1, 0, 0}, 1e-9));
  CHECK(constitutive_member(sys, Point::zero(3), Covector::zero(3), 1e-9));
  CHECK(!constitutive_member(s3, Point{1, 1, 0}, Covector::zero(3), 1e-9));
  CHECK(constitutive_member(sys, ControlledState{Point{1, 0, 0}, Covector{1, 0, 0}},
                            1e-9));
}

TEST_CASE("the two faces of the spring law agree for random data") {
  vmtest::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    const double k = rng.uniform(0.1, 5.0);
    const Metric g = vmtest::random_metric(rng, n);
    const Point q0 = vmtest::random_point(rng, n);
    const StaticSystem sys = spring(k, g, q0);
    const Point q = vmtest::random_point(rng, n);
    const Covector f = g.apply(difference(q, q0)) * k;
    CHECK(constitutive_residual(sys, q, f) <= 1e-12);
    // differentiating the energy must land on the same law
    const StaticSystem dual(sys.energy.with_mode(GradMode::kDualNumber), sys.space);
    CHECK(constitutive_residual(dual, q, f) <= 1e-12);
  }
}

TEST_CASE("solve_equilibrium inverts the harmonic law") {
  const StaticSystem s2 = spring(2.0, Metric::identity(3), Point::zero(3));
  const EquilibriumResult r = solve_equilibrium(s2, Covector{2, 0, 0}, Point{0.3, 1, -1});
  CHECK((difference(r.q, Point{1, 0, 0})).inf_norm() <= 1e-9);
  CHECK(r.residual <= 1e-10);

  // f = 0 lands on q0 from anywhere
  const StaticSystem s = spring(1.0, Metric::identity(2), Point{4, -2});
  const EquilibriumResult r0 = solve_equilibrium(s, Covector::zero(2), Point{-7, 9});
  CHECK((difference(r0.q, Point{4, -2})).inf_norm() <= 1e-9);

  // hand solve: k g (q - q0) = f with k=1, g=diag(2,1), q0=(1,1), f=(2,1)
  const StaticSystem sd = spring(1.0, Metric::diagonal({2, 1}), Point{1, 1});
  const EquilibriumResult rd = solve_equilibrium(sd, Covector{2, 1}, Point::zero(2));
  CHECK((difference(rd.q, Point{2, 2})).inf_norm() <= 1e-9);
}

TEST_CASE("solve then member holds for random SPD quadratics") {
  vmtest::Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform(0.0, 2.0));
    const StaticSystem sys =
        spring(rng.uniform(0.2, 4.0), vmtest::random_metric(rng, n),
               vmtest::random_point(rng, n));
    const Covector f = vmtest::random_covector(rng, n);
    const EquilibriumResult r = solve_equilibrium(sys, f, Point::zero(n));
    CHECK(constitutive_member(sys, r.q, f, 1e-9));
  }
}

TEST_CASE("solver reports non-convergence with the final residual") {
  // A linear-in-q energy has no stationary point anywhere: the gradient is a
  // nonzero constant and the Hessian is singular.
  const ScalarField linear = ScalarField::from_callable(
      1,
      [](auto q, auto, double) {
        using T = std::decay_t<decltype(q[0])>;
        return T(q[0]);
      },
      true, false);
  const StaticSystem sys(linear, AffineSpace(1));
  CHECK_THROWS_AS(solve_equilibrium(sys, Covector::zero(1), Point{0}),
                  SingularMatrixError);
}

TEST_CASE("statics works for a nonquadratic expression energy") {
  // U = cosh-like bowl built from exp: stationary where exp(q)-exp(-q) = f
  const ScalarField u =
      ScalarField::from_expression(parse_expression("exp(q[0])+exp(-q[0])", 1), {});
  const StaticSystem sys(u, AffineSpace(1));
  const EquilibriumResult r = solve_equilibrium(sys, Covector{1.0}, Point{0});
  // oracle: sinh(q)= 1/2 -> q = asinh(0.5)
  CHECK(std::abs(r.q[0] - std::asinh(0.5)) <= 1e-9);
}
