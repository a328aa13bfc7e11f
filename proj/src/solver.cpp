#include "varmech/solver.hpp"

#include <cmath>

#include "varmech/error.hpp"

namespace varmech {

namespace {

struct State {
  std::vector<double> q;
  std::vector<double> p;
};

State axpy(const State& s, const State& d, double a) {
  State out = s;
  for (size_t i = 0; i < out.q.size(); ++i) {
    out.q[i] += a * d.q[i];
    out.p[i] += a * d.p[i];
  }
  return out;
}

}  // namespace

PhaseTrajectory solve_forward(const LagrangianSystem& sys, const Point& q0,
                              const Covector& p0, const CovectorCurve& phi, double t0,
                              double t1, int steps) {
  const int n = sys.space.dim;
  if (q0.dim() != n || p0.dim() != n || phi.dim() != n)
    throw DimensionError("solve_forward: dimension mismatch");
  if (steps < 8) throw DomainError("solve_forward: at least 8 steps required");
  if (!(t0 < t1)) throw DomainError("solve_forward: requires t0 < t1");
  if (!phi.interval().contains(t0) || !phi.interval().contains(t1))
    throw DomainError("solve_forward: force curve does not cover [t0, t1]");

  const double h = (t1 - t0) / steps;
  // Warm start for the Legendre inverse across stages.
  Vector v_guess = Vector::zero(n);

  auto rhs = [&](double t, const State& s) {
    const Point q(std::vector<double>(s.q));
    const Covector p(std::vector<double>(s.p));
    const Vector v = legendre_inverse(sys, q, p, v_guess);
    v_guess = v;
    const Covector pdot = sys.dq(q, v) + phi.at(t);
    State d;
    d.q.assign(v.comps().begin(), v.comps().end());
    d.p.assign(pdot.comps().begin(), pdot.comps().end());
    return d;
  };

  State s{std::vector<double>(q0.coords().begin(), q0.coords().end()),
          std::vector<double>(p0.comps().begin(), p0.comps().end())};

  std::vector<Point> qs;
  std::vector<Vector> vs;
  std::vector<Covector> ps;
  std::vector<Covector> pdots;
  qs.reserve(steps + 1);
  vs.reserve(steps + 1);
  ps.reserve(steps + 1);
  pdots.reserve(steps + 1);

  auto record = [&](double t, const State& state) {
    const Point q(std::vector<double>(state.q));
    const Covector p(std::vector<double>(state.p));
    const Vector v = legendre_inverse(sys, q, p, v_guess);
    v_guess = v;
    qs.push_back(q);
    ps.push_back(p);
    vs.push_back(v);
    pdots.push_back(sys.dq(q, v) + phi.at(t));
  };

  record(t0, s);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const State k1 = rhs(t, s);
    const State k2 = rhs(t + 0.5 * h, axpy(s, k1, 0.5 * h));
    const State k3 = rhs(t + 0.5 * h, axpy(s, k2, 0.5 * h));
    const State k4 = rhs(t + h, axpy(s, k3, h));
    for (int j = 0; j < n; ++j) {
      s.q[j] += h / 6.0 * (k1.q[j] + 2.0 * k2.q[j] + 2.0 * k3.q[j] + k4.q[j]);
      s.p[j] += h / 6.0 * (k1.p[j] + 2.0 * k2.p[j] + 2.0 * k3.p[j] + k4.p[j]);
    }
    record((i + 1 == steps) ? t1 : t0 + (i + 1) * h, s);
  }

  const TimeInterval iv{t0, t1};
  return PhaseTrajectory{Motion::from_grid(iv, qs, &vs),
                         CovectorCurve(detail::CurveCore::view(phi.core(), iv)),
                         CovectorCurve::from_grid(iv, ps, &pdots)};
}

ConsistencyReport script_D_consistency(const LagrangianSystem& sys,
                                       const PhaseTrajectory& traj,
                                       const std::vector<TimeInterval>& subintervals,
                                       double tol, int dirac_grid) {
  ConsistencyReport rep;

  // Channel (a): each subinterval with momenta read off pi at its ends.
  for (const TimeInterval& sub : subintervals) {
    if (!traj.xi.interval().contains(sub))
      throw DomainError("script_D_consistency: subinterval outside trajectory domain");
    const Motion m = traj.xi.restrict(sub.t0, sub.t1);
    const CovectorTriple c{traj.phi.restrict(sub.t0, sub.t1), traj.pi.at(sub.t0),
                           traj.pi.at(sub.t1)};
    const DynamicsReport r = dynamics_membership(sys, m, c, tol);
    rep.interval_ok = rep.interval_ok && r.member;
    rep.interval_worst = std::max(
        {rep.interval_worst, r.el_max, r.p0_residual, r.p1_residual});
  }

  // Channel (b): pointwise infinitesimal membership on a dense grid.
  const TimeInterval iv = traj.xi.interval();
  const int grid = std::max(9, dirac_grid);
  for (int i = 0; i < grid; ++i) {
    const double t = iv.t0 + iv.span() * i / (grid - 1);
    const PhasePoint4 x{traj.xi.at(t), traj.pi.at(t), traj.xi.velocity(t),
                        traj.pi.derivative(t) - traj.phi.at(t)};
    const InfinitesimalReport r = infinitesimal_membership(sys, x, tol);
    rep.dirac_ok = rep.dirac_ok && r.member;
    rep.dirac_worst = std::max({rep.dirac_worst, r.r_residual, r.p_residual});
  }

  rep.channels_agree = rep.interval_ok == rep.dirac_ok;
  return rep;
}

}  // namespace varmech
