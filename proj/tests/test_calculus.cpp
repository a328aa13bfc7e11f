#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "expression_corpus.hpp"
#include "test_util.hpp"
#include "varmech/field.hpp"
#include "varmech/quadrature.hpp"
#include "varmech/systems.hpp"

using namespace varmech;

namespace {

ScalarField sho_lagrangian_field(double m, double k, int n) {
  return make_lagrangian_oscillator(HarmonicParams::standard(n, m, k)).L;
}

}  // namespace

TEST_CASE("parser accepts the grammar and reports positions") {
  const Expression e = parse_expression("0.5*(qdot[0]^2) - 0.5*(q[0]^2)", 1);
  const std::vector<double> q{2.0}, v{3.0};
  CHECK(e.eval<double>(q, v, 0.0, {}) == doctest::Approx(0.5 * 9 - 0.5 * 4));
  CHECK(!e.uses_time());
  CHECK(e.uses_velocity());

  CHECK_THROWS_AS(parse_expression("q[", 1), ParseError);
  try {
    parse_expression("q[", 1);
  } catch (const ParseError& err) {
    CHECK(err.line == 1);
    CHECK(err.column >= 3);
  }
  CHECK_THROWS_AS(parse_expression("q[5]", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("1 + ", 1), ParseError);
  CHECK_THROWS_AS(parse_expression("(1", 1), ParseError);

  // direct evaluation oracle
  const Expression s = parse_expression("sin(t)*q[0]", 1);
  CHECK(s.eval<double>(std::vector<double>{2.0}, std::vector<double>{0.0}, M_PI / 2, {}) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("parser handles precedence and parameters") {
  // ^ right-associative: 2^3^2 = 2^9
  const Expression e = parse_expression("2^3^2", 1);
  const std::vector<double> z{0.0};
  CHECK(e.eval<double>(z, z, 0.0, {}) == 512.0);
  // unary minus binds the operand of ^ per the grammar: -2^2 = (-2)^2
  const Expression m = parse_expression("-2^2", 1);
  CHECK(m.eval<double>(z, z, 0.0, {}) == 4.0);
  // named parameters
  const Expression p = parse_expression("k*q[0] + c", 1);
  CHECK(p.eval<double>(std::vector<double>{2.0}, z, 0.0, {{"k", 3.0}, {"c", 1.0}}) == 7.0);
  CHECK_THROWS_AS(p.eval<double>(std::vector<double>{2.0}, z, 0.0, {}), ConfigError);
}

TEST_CASE("parser round-trip is a fixed point") {
  const char* corpus[] = {
      "0.5*(qdot[0]^2) - 0.5*(q[0]^2)",
      "sin(t)*q[0]",
      "-q[0]^2",
      "2^3^2",
      "k*q[0]+c/(1+qdot[0]^2)",
      "sqrt(1+q[0]^2)*exp(-t)",
      "cos(q[0]*q[1]) - qdot[1]/3",
  };
  for (const char* src : corpus) {
    const Expression a = parse_expression(src, 2);
    const std::string printed = to_string(a);
    const Expression b = parse_expression(printed, 2);
    CHECK(structurally_equal(a, b));
    CHECK(to_string(b) == printed);
  }
}

TEST_CASE("partial_q matches hand results") {
  // spring energy gradient: k g(q - q0) with k=1, g=I, q0=0, checked through
  // both the analytic and the dual-number channel
  const ScalarField u = make_static_oscillator(HarmonicParams::standard(3)).energy;
  const Covector g = partial_q(u, Point{1, 0, 0}, Vector::zero(3), 0.0);
  CHECK(g == Covector{1, 0, 0});
  const Covector g_dual = partial_q(u.with_mode(GradMode::kDualNumber), Point{1, 0, 0},
                                    Vector::zero(3), 0.0);
  CHECK((g_dual - Covector{1, 0, 0}).inf_norm() <= 1e-15);

  const ScalarField c = ScalarField::from_callable(
      2, [](auto, auto, double) { return 7.0; }, true, false);
  CHECK(partial_q(c, Point{1, 2}, Vector::zero(2), 0.0) == Covector{0, 0});

  // hand differentiation + finite-difference oracle for q0*q1
  const Expression e = parse_expression("q[0]*q[1]", 2);
  const ScalarField f = ScalarField::from_expression(e, {});
  const Point q{2, 3};
  const Covector d = partial_q(f, q, Vector::zero(2), 0.0);
  CHECK(d[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-14));
  const Covector fd = partial_q_fd(f, q, Vector::zero(2), 0.0);
  CHECK((d - fd).inf_norm() <= 1e-8);
}

TEST_CASE("partial_qdot matches hand results") {
  // momentum of the oscillator Lagrangian: m g(qdot)
  const ScalarField l = sho_lagrangian_field(1.0, 1.0, 3);
  const Covector lam = partial_qdot(l, Point::zero(3), Vector{0, -1, 0}, 0.0);
  CHECK(lam == Covector{0, -1, 0});
  const Covector lam_dual = partial_qdot(l.with_mode(GradMode::kDualNumber),
                                         Point::zero(3), Vector{0, -1, 0}, 0.0);
  CHECK((lam_dual - Covector{0, -1, 0}).inf_norm() <= 1e-15);

  const ScalarField q_only = ScalarField::from_expression(parse_expression("q[0]^2", 1), {});
  CHECK(partial_qdot(q_only, Point{2}, Vector{5}, 0.0) == Covector{0});

  // <g(v), v> with g=diag(2,1) at v=(1,1): gradient (4, 2)
  const ScalarField kin = ScalarField::from_callable(
      2,
      [](auto, auto v, double) {
        using T = std::decay_t<decltype(v[0])>;
        return T(2.0 * v[0] * v[0] + v[1] * v[1]);
      },
      true, true);
  const Covector g = partial_qdot(kin, Point::zero(2), Vector{1, 1}, 0.0);
  CHECK(g[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("directional derivative") {
  const ScalarField l = sho_lagrangian_field(1.0, 1.0, 3);
  CHECK(directional(l, Point{1, 0, 0}, Vector::zero(3), 0.0, Vector::zero(3),
                    Vector::zero(3)) == 0.0);
  // dL/dq = -k(q - q0): direction (1,0,0) gives -1
  CHECK(directional(l, Point{1, 0, 0}, Vector::zero(3), 0.0, Vector{1, 0, 0},
                    Vector::zero(3)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("directional is linear in the direction pair") {
  vmtest::Rng rng(7);
  const ScalarField f = ScalarField::from_expression(
      parse_expression("sin(q[0])*qdot[1] + q[1]^2*qdot[0] - cos(q[0]*q[1])", 2), {});
  for (int trial = 0; trial < 40; ++trial) {
    const Point q = vmtest::random_point(rng, 2);
    const Vector v = vmtest::random_vector(rng, 2);
    const Vector dq1 = vmtest::random_vector(rng, 2), dq2 = vmtest::random_vector(rng, 2);
    const Vector dv1 = vmtest::random_vector(rng, 2), dv2 = vmtest::random_vector(rng, 2);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    const double lhs =
        directional(f, q, v, 0.0, dq1 * a + dq2 * b, dv1 * a + dv2 * b);
    const double rhs = a * directional(f, q, v, 0.0, dq1, dv1) +
                       b * directional(f, q, v, 0.0, dq2, dv2);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("quadrature basics") {
  CHECK(integrate_time([](double) { return 2.0; }, 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(integrate_time([](double t) { return std::sin(t); }, 0.0, M_PI) - 2.0) <=
        1e-10);
  CHECK(std::abs(integrate_time([](double t) { return t * t; }, 0.0, 1.0) - 1.0 / 3.0) <=
        1e-12);
  CHECK(integrate_time([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(integrate_time([](double) { return 1.0; }, 1.0, 0.0), DomainError);
}

TEST_CASE("quadrature is exact for degree <= 9 polynomials") {
  vmtest::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(10);
    for (double& x : c) x = rng.uniform(-1.0, 1.0);
    auto poly = [&](double t) {
      double acc = 0.0;
      for (int k = 9; k >= 0; --k) acc = acc * t + c[k];
      return acc;
    };
    // antiderivative oracle
    auto anti = [&](double t) {
      double acc = 0.0;
      for (int k = 9; k >= 0; --k) acc = acc * t + c[k] / (k + 1);
      return acc * t;
    };
    const double got = integrate_time(poly, -1.0, 1.0, 1e-13);
    CHECK(std::abs(got - (anti(1.0) - anti(-1.0))) <= 1e-13);
  }
}

TEST_CASE("quadrature reports unreachable tolerance") {
  // |t|^(1/3)-type kink cannot reach 1e-16 everywhere at finite depth; use a
  // genuinely rough integrand: a step function.
  auto step = [](double t) { return t < 0.3333333 ? 0.0 : 1.0; };
  CHECK_THROWS_AS(integrate_time(step, 0.0, 1.0, 1e-16), QuadratureError);
}

TEST_CASE("dual gradients match central differences on random expressions") {
  vmtest::Rng rng(9);
  int accepted = 0;
  while (accepted < 100) {
    const std::string src = vmtest::random_expression(rng, 2);
    const Expression e = parse_expression(src, 2);
    const ScalarField f = ScalarField::from_expression(e, {});
    const Point q = vmtest::random_point(rng, 2, -1.0, 1.0);
    const Vector v = vmtest::random_vector(rng, 2, -1.0, 1.0);
    const double t = rng.uniform(0.0, 1.0);
    if (!vmtest::tame_at(f, q, v, t)) continue;  // resample ill-conditioned draws
    ++accepted;
    const Covector gq = partial_q(f, q, v, t);
    const Covector gq_fd = partial_q_fd(f, q, v, t);
    const Covector gv = partial_qdot(f, q, v, t);
    const Covector gv_fd = partial_qdot_fd(f, q, v, t);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(gq[i] - gq_fd[i]) <=
            1e-6 * std::max({1.0, std::abs(gq[i]), std::abs(gq_fd[i])}));
      CHECK(std::abs(gv[i] - gv_fd[i]) <=
            1e-6 * std::max({1.0, std::abs(gv[i]), std::abs(gv_fd[i])}));
    }
  }
}

TEST_CASE("generated expressions round-trip through the printer") {
  vmtest::Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string src = vmtest::random_expression(rng, 2);
    const Expression a = parse_expression(src, 2);
    const Expression b = parse_expression(to_string(a), 2);
    CHECK(structurally_equal(a, b));
  }
}

TEST_CASE("finite-difference mode and double-only evaluators") {
  // the same field through all three channels
  const ScalarField dual_field = ScalarField::from_expression(
      parse_expression("sin(q[0])*qdot[0] + q[0]^3", 1), {});
  const ScalarField fd_field = dual_field.with_mode(GradMode::kFiniteDifference);
  const ScalarField double_only = ScalarField::from_double_callable(
      1,
      [](std::span<const double> q, std::span<const double> v, double) {
        return std::sin(q[0]) * v[0] + q[0] * q[0] * q[0];
      },
      true, true);
  CHECK(!double_only.has_dual_channel());
  const Point q{0.7};
  const Vector v{-1.2};
  const Covector exact = partial_q(dual_field, q, v, 0.0);
  CHECK((partial_q(fd_field, q, v, 0.0) - exact).inf_norm() <= 1e-8);
  CHECK((partial_q(double_only, q, v, 0.0) - exact).inf_norm() <= 1e-8);
  // second derivatives fall back to nested differences: d2/dq2 = -sin(q) v + 6q
  const double h_exact = -std::sin(0.7) * (-1.2) + 6.0 * 0.7;
  CHECK(std::abs(hessian_qq(double_only, q, v, 0.0).at(0, 0) - h_exact) <= 1e-5);
}

TEST_CASE("second derivatives from nested duals") {
  // L = q0^2 * v0^2: d2L/dv2 = 2 q0^2, d2L/dq2 = 2 v0^2
  const ScalarField f = ScalarField::from_expression(
      parse_expression("q[0]^2*qdot[0]^2", 1), {});
  const Point q{3};
  const Vector v{2};
  CHECK(hessian_vv(f, q, v, 0.0).at(0, 0) == doctest::Approx(18.0).epsilon(1e-13));
  CHECK(hessian_qq(f, q, v, 0.0).at(0, 0) == doctest::Approx(8.0).epsilon(1e-13));
}
