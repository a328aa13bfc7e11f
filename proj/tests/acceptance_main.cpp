// Acceptance suite: one line per criterion, PASS/FAIL with the measured
// numbers. Exit status is nonzero if any criterion fails. Tolerances are
// fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "expression_corpus.hpp"
#include "test_util.hpp"
#include "varmech/csv.hpp"
#include "varmech/quadrature.hpp"
#include "varmech/solver.hpp"
#include "varmech/systems.hpp"

using namespace varmech;
using vmtest::Rng;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------

void criterion_1_statics() {
  Timer timer;
  Rng rng(101);
  double worst_residual = 0.0;
  double worst_inversion = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    const double k = rng.uniform(0.2, 5.0);
    const Metric g = vmtest::random_metric(rng, n);
    const Point q0 = vmtest::random_point(rng, n);
    // Dual-number mode: the variational side differentiates the energy, the
    // force side is the closed-form law, and nothing is compared to itself.
    const StaticSystem sys(
        make_static_oscillator(HarmonicParams(1.0, k, g, q0))
            .energy.with_mode(GradMode::kDualNumber),
        AffineSpace(n));
    const Point q = vmtest::random_point(rng, n);
    const Covector f = g.apply(difference(q, q0)) * k;

    worst_residual = std::max(worst_residual, constitutive_residual(sys, q, f));
    const EquilibriumResult inv = solve_equilibrium(sys, f, Point::zero(n), 1e-12, 60);
    worst_inversion = std::max(worst_inversion, difference(inv.q, q).inf_norm());
  }
  const double secs = timer.seconds();
  const bool pass = worst_residual <= 1e-12 && worst_inversion <= 1e-9 && secs < 1.0;
  report(1, "statics: constitutive set of the spring law and its inversion", pass,
         fmt("max residual %.2e, max inversion error %.2e, %.3f s", worst_residual,
             worst_inversion, secs));
}

void criterion_2_variational_derivative() {
  Timer timer;
  Rng rng(102);
  const TimeInterval iv{0.0, 1.5};

  // The oscillator and one random expression system (random coefficients,
  // smooth terms).
  const LagrangianSystem sho = make_lagrangian_oscillator(HarmonicParams::standard(2));
  char expr[256];
  std::snprintf(expr, sizeof expr,
                "%.6f*qdot[0]^2 + %.6f*qdot[1]^2 + %.6f*qdot[0]*qdot[1] + "
                "%.6f*sin(q[0])*qdot[1] - %.6f*cos(q[0]*q[1]) - %.6f*q[1]^2",
                rng.uniform(0.3, 1.0), rng.uniform(0.3, 1.0), rng.uniform(-0.2, 0.2),
                rng.uniform(-0.5, 0.5), rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0));
  const LagrangianSystem random_sys(
      ScalarField::from_expression(parse_expression(expr, 2), {}), AffineSpace(2));

  double worst = 0.0;
  for (const LagrangianSystem* sys : {&sho, &random_sys}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Motion m = vmtest::random_smooth_motion(rng, iv, 2);
      const Displacement d = vmtest::random_smooth_displacement(rng, iv, 2);
      const double direct = action_derivative_direct(*sys, m, d, 1e-10);
      const double by_parts = action_derivative_by_parts(*sys, m, d, 1e-10);
      const double s = 1e-5;
      const double finite = (action(*sys, perturb(m, d, s), 1e-11) -
                             action(*sys, perturb(m, d, -s), 1e-11)) /
                            (2.0 * s);
      worst = std::max({worst, rel_gap(direct, by_parts), rel_gap(direct, finite),
                        rel_gap(by_parts, finite)});
    }
  }
  const double secs = timer.seconds();
  const bool pass = worst <= 1e-6 && secs < 10.0;
  report(2, "action derivative: direct, by-parts and difference-quotient channels",
         pass, fmt("max pairwise relative gap %.2e, %.3f s", worst, secs));
}

void criterion_3_membership_equivalence() {
  Rng rng(103);
  int disagreements = 0;
  int wrong_verdicts = 0;
  double positive_margin = 0.0;

  for (int caseno = 0; caseno < 40; ++caseno) {
    const bool positive = caseno < 20;
    const double m = rng.uniform(0.5, 2.0);
    const double k = rng.uniform(0.5, 2.0);
    const LagrangianSystem sys =
        make_lagrangian_oscillator(HarmonicParams::standard(2, m, k));
    const Point q0(vmtest::random_point(rng, 2));
    const Covector p0(vmtest::random_covector(rng, 2));
    const TimeInterval pad{-0.5, 2.5};
    const bool forced = caseno % 2 == 1;
    const Covector fc = forced ? vmtest::random_covector(rng, 2) : Covector::zero(2);
    const CovectorCurve phi = CovectorCurve::constant(pad, fc);
    const PhaseTrajectory traj = solve_forward(sys, q0, p0, phi, 0.0, 2.0, 512);

    CovectorTriple triple{traj.phi, traj.pi.at(0.0), traj.pi.at(2.0)};
    if (!positive) {
      // corrupt one of the three covector slots by at least 1e-3
      const double bump = 1e-3 * (1.0 + rng.uniform(0.0, 9.0));
      const int which = caseno % 3;
      if (which == 0)
        triple.p0 = triple.p0 + Covector{bump, -bump};
      else if (which == 1)
        triple.p1 = triple.p1 + Covector{-bump, bump};
      else
        triple.phi = CovectorCurve::constant(pad, fc + Covector{bump, bump})
                         .restrict(0.0, 2.0);
    }

    const DynamicsReport a = dynamics_membership(sys, traj.xi, triple, 1e-6);
    const VariationalReport b =
        variational_membership(sys, traj.xi, triple, 200, 0, 1e-6);
    if (a.member != b.member) ++disagreements;
    if (a.member != positive || b.member != positive) ++wrong_verdicts;
    if (positive)
      positive_margin = std::max(
          {positive_margin, a.el_max, a.p0_residual, a.p1_residual, b.max_mismatch});
  }
  const bool pass = disagreements == 0 && wrong_verdicts == 0;
  report(3, "interval dynamics: residual and variational channels agree 20+20", pass,
         fmt("disagreements %.0f, wrong verdicts %.0f, positive margin %.2e",
             disagreements, wrong_verdicts, positive_margin));
}

void criterion_4_closed_form_reproduction() {
  Timer timer;
  const HarmonicParams params = HarmonicParams::standard(3);
  const LagrangianSystem sys = make_lagrangian_oscillator(params);
  const CovectorCurve zero = CovectorCurve::zero(TimeInterval{-1.0, 7.0}, 3);

  auto sup_error = [&](int steps) {
    const PhaseTrajectory traj =
        solve_forward(sys, Point{1, 0, 0}, Covector::zero(3), zero, 0.0, 2 * M_PI, steps);
    double worst = 0.0;
    for (int i = 0; i <= 512; ++i) {
      const double t = 2 * M_PI * i / 512.0;
      const auto [q_ref, p_ref] = closed_form(params, Point{1, 0, 0}, Covector::zero(3), t);
      worst = std::max(worst, difference(traj.xi.at(t), q_ref).inf_norm());
      worst = std::max(worst, (traj.pi.at(t) - p_ref).inf_norm());
    }
    return worst;
  };
  const double e512 = sup_error(512);
  const double e1024 = sup_error(1024);
  const double secs = timer.seconds();
  const bool pass = e512 <= 1e-6 && e512 / e1024 >= 12.0 && secs < 1.0;
  report(4, "oscillator: RK4 against the certified closed form, 4th-order decay", pass,
         fmt("sup error %.2e, halving ratio %.1f, %.3f s", e512, e512 / e1024, secs));
}

void criterion_5_interval_dirac_equivalence() {
  Rng rng(105);
  int wrong = 0;
  int channel_splits = 0;
  for (int caseno = 0; caseno < 20; ++caseno) {
    const bool corrupt = caseno >= 10;
    const LagrangianSystem sys = make_lagrangian_oscillator(HarmonicParams::standard(
        2, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)));
    const CovectorCurve zero = CovectorCurve::zero(TimeInterval{-0.5, 3.5}, 2);
    PhaseTrajectory traj = solve_forward(sys, vmtest::random_point(rng, 2),
                                         vmtest::random_covector(rng, 2), zero, 0.0,
                                         3.0, 512);
    if (corrupt) {
      const int which = caseno % 3;
      const TimeInterval iv = traj.xi.interval();
      if (which == 0) {
        // shift the momentum curve
        traj.pi = CovectorCurve::closed_form(
            iv, 2, [pi = traj.pi](double t) { return pi.at(t) + Covector{0.01, 0}; },
            [pi = traj.pi](double t) { return pi.derivative(t); });
      } else if (which == 1) {
        // lie about the force
        traj.phi = CovectorCurve::constant(iv, Covector{0.02, -0.01});
      } else {
        // bend the motion
        traj.xi = perturb(traj.xi,
                          Displacement::polynomial(iv, {Vector{0.01, 0}, Vector{0, 0.01}}),
                          1.0);
      }
    }
    std::vector<TimeInterval> subs;
    const int nsubs = 3 + static_cast<int>(rng.uniform(0.0, 3.0));
    for (int s = 0; s < nsubs; ++s) {
      const double a = rng.uniform(0.0, 2.0);
      subs.push_back(TimeInterval{a, a + rng.uniform(0.3, 1.0)});
    }
    const ConsistencyReport rep = script_D_consistency(sys, traj, subs, 1e-6);
    if (rep.consistent() != !corrupt) ++wrong;
    if (!rep.channels_agree) ++channel_splits;
  }
  const bool pass = wrong == 0 && channel_splits == 0;
  report(5, "finite-interval and pointwise dynamics agree on 10+10 trajectories", pass,
         fmt("wrong verdicts %.0f, channel disagreements %.0f", wrong, channel_splits));
}

void criterion_6_legendre_pipeline() {
  Rng rng(106);
  double worst_h = 0.0;
  double worst_roundtrip = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    const HarmonicParams params(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0),
                                vmtest::random_metric(rng, n),
                                vmtest::random_point(rng, n));
    const LagrangianSystem sys = make_lagrangian_oscillator(params);
    const HamiltonianSystem reference = closed_form_hamiltonian(params);
    const Point q = vmtest::random_point(rng, n);
    const Covector p = vmtest::random_covector(rng, n);
    worst_h =
        std::max(worst_h, std::abs(hamiltonian_value(sys, q, p) - reference.value(q, p)));
    const Vector rho = legendre_inverse(sys, q, p);
    worst_roundtrip = std::max(worst_roundtrip, (legendre(sys, q, rho) - p).inf_norm());
  }

  const LagrangianSystem quartic(
      ScalarField::from_expression(parse_expression("0.25*qdot[0]^4", 1), {}),
      AffineSpace(1));
  const Vector rho8 = legendre_inverse(quartic, Point{0}, Covector{8});
  const double quartic_err = std::abs(rho8[0] - 2.0);

  const bool pass = worst_h <= 1e-10 && worst_roundtrip <= 1e-9 && quartic_err <= 1e-10;
  report(6, "Legendre transformation against closed forms, round trips, quartic inverse",
         pass,
         fmt("max H gap %.2e, max round trip %.2e, quartic error %.2e", worst_h,
             worst_roundtrip, quartic_err));
}

void criterion_7_triple_equivalence() {
  Rng rng(0);  // seed 0 per the contract
  const LagrangianSystem sys = make_lagrangian_oscillator(HarmonicParams::standard(3));
  const HamiltonianSystem ham = HamiltonianSystem::derived(sys);
  int mismatches = 0;
  int members = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    PhasePoint4 x{vmtest::random_point(rng, 3), Covector::zero(3),
                  vmtest::random_vector(rng, 3), Covector::zero(3)};
    x.p = legendre(sys, x.q, x.qdot);
    x.r = sys.dq(x.q, x.qdot);
    if (rng.uniform(0.0, 1.0) < 0.5) {
      // push the point off the dynamics by at least 1e-3 in some slot
      const double bump = 1e-3 * (1.0 + rng.uniform(0.0, 99.0));
      const int slot = static_cast<int>(rng.uniform(0.0, 3.0));
      const int coord = static_cast<int>(rng.uniform(0.0, 3.0));
      std::vector<double> delta(3, 0.0);
      delta[coord] = bump;
      if (slot == 0)
        x.p = x.p + Covector(delta);
      else if (slot == 1)
        x.r = x.r + Covector(delta);
      else
        x.qdot = x.qdot + Vector(delta);
    }
    // slot 2 moves qdot after p, r were derived, so all three relations break
    const bool a = infinitesimal_membership(sys, x, 1e-7).member;
    const bool b = generating_family_membership(sys, x, 1e-7).member;
    const bool c = hamiltonian_membership(ham, x, 1e-7).member;
    if (a != b || b != c) ++mismatches;
    if (a) ++members;
  }
  const bool pass = mismatches == 0 && members > 300 && members < 700;
  report(7, "infinitesimal, generating-family and Hamiltonian memberships coincide",
         pass, fmt("mismatches %.0f over 1000 points, members %.0f", mismatches, members));
}

void criterion_8_hamilton_equations() {
  Rng rng(108);
  // Generic mass, stiffness and metric keep the two evaluation routes from
  // collapsing into bitwise-identical arithmetic; dual-number mode keeps the
  // derived Hamiltonian's partials out of the closed forms the trajectory was
  // built from.
  const HarmonicParams params(2.0, 3.0, vmtest::random_metric(rng, 3),
                              vmtest::random_point(rng, 3));
  const LagrangianSystem dual_sys(
      make_lagrangian_oscillator(params).L.with_mode(GradMode::kDualNumber),
      AffineSpace(3));
  const HamiltonianSystem ham = HamiltonianSystem::derived(dual_sys);
  const TimeInterval iv{0.0, 2 * M_PI};
  const PhaseTrajectory cf = closed_form_trajectory(
      params, vmtest::random_point(rng, 3), vmtest::random_covector(rng, 3), iv);

  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(iv.t0, iv.t1);
    const auto [rq, rp] = hamilton_residuals(ham, cf, t);
    worst = std::max({worst, rq.inf_norm(), rp.inf_norm()});
  }

  const Covector c{0.7, -0.3, 0.1};
  const PhaseTrajectory forced{cf.xi, CovectorCurve::constant(iv, c), cf.pi};
  double worst_shift = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(iv.t0, iv.t1);
    const auto [rq_f, rp_f] = hamilton_residuals(ham, forced, t);
    const auto [rq_0, rp_0] = hamilton_residuals(ham, cf, t);
    worst_shift = std::max(worst_shift, ((rq_f - rq_0) + c).inf_norm());
    worst_shift = std::max(worst_shift, (rp_f - rp_0).inf_norm());
  }
  const bool pass = worst <= 1e-9 && worst_shift <= 1e-12;
  report(8, "canonical equations hold along the closed form; forces shift affinely",
         pass, fmt("max residual %.2e, max shift defect %.2e", worst, worst_shift));
}

void criterion_9_energy_conservation() {
  const LagrangianSystem sys = make_lagrangian_oscillator(HarmonicParams::standard(3));
  const CovectorCurve zero = CovectorCurve::zero(TimeInterval{-1.0, 7.0}, 3);
  const PhaseTrajectory traj =
      solve_forward(sys, Point{1, 0, 0}, Covector::zero(3), zero, 0.0, 2 * M_PI, 512);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 512; ++i) {
    const double t = 2 * M_PI * i / 512.0;
    const double h = hamiltonian_value(sys, traj.xi.at(t), traj.pi.at(t));
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  const double drift = hi - lo;
  const bool pass = drift <= 1e-6;
  report(9, "Hamiltonian is conserved along unforced solver output", pass,
         fmt("max-min drift %.2e over a period at 512 steps", drift));
}

void criterion_10_calculus_layer() {
  Rng rng(110);
  double worst_grad = 0.0;
  int round_trip_failures = 0;
  int accepted = 0;
  while (accepted < 100) {
    const std::string src = vmtest::random_expression(rng, 2);
    const Expression e = parse_expression(src, 2);
    if (!structurally_equal(e, parse_expression(to_string(e), 2))) ++round_trip_failures;
    const ScalarField f = ScalarField::from_expression(e, {});
    const Point q = vmtest::random_point(rng, 2, -1.0, 1.0);
    const Vector v = vmtest::random_vector(rng, 2, -1.0, 1.0);
    const double t = rng.uniform(0.0, 1.0);
    if (!vmtest::tame_at(f, q, v, t)) continue;
    ++accepted;
    const Covector gq = partial_q(f, q, v, t);
    const Covector gq_fd = partial_q_fd(f, q, v, t);
    const Covector gv = partial_qdot(f, q, v, t);
    const Covector gv_fd = partial_qdot_fd(f, q, v, t);
    for (int i = 0; i < 2; ++i) {
      worst_grad = std::max(
          worst_grad, std::abs(gq[i] - gq_fd[i]) /
                          std::max({1.0, std::abs(gq[i]), std::abs(gq_fd[i])}));
      worst_grad = std::max(
          worst_grad, std::abs(gv[i] - gv_fd[i]) /
                          std::max({1.0, std::abs(gv[i]), std::abs(gv_fd[i])}));
    }
  }

  double worst_quad = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> c(10);
    for (double& x : c) x = rng.uniform(-1.0, 1.0);
    auto poly = [&](double t) {
      double acc = 0.0;
      for (int k = 9; k >= 0; --k) acc = acc * t + c[k];
      return acc;
    };
    auto anti = [&](double t) {
      double acc = 0.0;
      for (int k = 9; k >= 0; --k) acc = acc * t + c[k] / (k + 1);
      return acc * t;
    };
    const double got = integrate_time(poly, -1.0, 1.0, 1e-13);
    worst_quad = std::max(worst_quad, std::abs(got - (anti(1.0) - anti(-1.0))));
  }
  const bool pass = worst_grad <= 1e-6 && worst_quad <= 1e-13 && round_trip_failures == 0;
  report(10, "calculus layer: dual vs difference gradients, exact quadrature, parser",
         pass,
         fmt("max gradient gap %.2e, max quadrature error %.2e, round-trip failures %.0f",
             worst_grad, worst_quad, round_trip_failures));
}

}  // namespace

int main() {
  criterion_1_statics();
  criterion_2_variational_derivative();
  criterion_3_membership_equivalence();
  criterion_4_closed_form_reproduction();
  criterion_5_interval_dirac_equivalence();
  criterion_6_legendre_pipeline();
  criterion_7_triple_equivalence();
  criterion_8_hamilton_equations();
  criterion_9_energy_conservation();
  criterion_10_calculus_layer();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
