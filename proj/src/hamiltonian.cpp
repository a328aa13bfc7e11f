#include "varmech/hamiltonian.hpp"

#include <cmath>

#include "varmech/error.hpp"

namespace varmech {

double EnergyEvaluator::value(const Point& q, const Covector& p, const Vector& qdot) const {
  return energy(source, q, p, qdot);
}

double energy(const LagrangianSystem& sys, const Point& q, const Covector& p,
              const Vector& qdot) {
  return pair(p, qdot) - sys.value(q, qdot);
}

Covector legendre(const LagrangianSystem& sys, const Point& q, const Vector& qdot) {
  return sys.dv(q, qdot);
}

double critical_residual(const LagrangianSystem& sys, const Point& q, const Covector& p,
                         const Vector& qdot) {
  return (p - legendre(sys, q, qdot)).inf_norm();
}

Vector legendre_inverse(const LagrangianSystem& sys, const Point& q, const Covector& p) {
  return legendre_inverse(sys, q, p, Vector::zero(sys.space.dim));
}

Vector legendre_inverse(const LagrangianSystem& sys, const Point& q, const Covector& p,
                        const Vector& v_init, double tol, int max_iter) {
  const int n = sys.space.dim;
  if (p.dim() != n || v_init.dim() != n)
    throw DimensionError("legendre_inverse: dimension mismatch");

  Vector v = v_init;
  auto residual_at = [&](const Vector& w) { return legendre(sys, q, w) - p; };
  Covector res = residual_at(v);
  int nudges = 0;

  for (int iter = 0; iter < max_iter; ++iter) {
    const double rn = res.inf_norm();
    if (rn <= tol) return v;

    LuFactors lu;
    bool singular = false;
    try {
      lu = lu_factor(hessian_vv(sys.L, q, v, 0.0));
    } catch (const SingularMatrixError&) {
      singular = true;
    }
    if (singular) {
      // Stationary pocket of the merit function; no Newton direction exists.
      // Nudge deterministically toward the residual and retry.
      if (++nudges > 3)
        throw HyperregularityError(
            "legendre_inverse: velocity Hessian is singular (non-hyperregular point)");
      std::vector<double> w(v.comps().begin(), v.comps().end());
      const double scale = 1e-3 * std::max(1.0, v.inf_norm());
      for (int i = 0; i < n; ++i) w[i] += (res[i] <= 0.0 ? scale : -scale);
      v = Vector(std::move(w));
      res = residual_at(v);
      continue;
    }

    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -res[i];
    const Vector step(lu_solve(lu, rhs));

    double s = 1.0;
    bool advanced = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Vector trial = v + step * s;
      const Covector trial_res = residual_at(trial);
      if (trial_res.inf_norm() < rn) {
        v = trial;
        res = trial_res;
        advanced = true;
        break;
      }
      s *= 0.5;
    }
    if (!advanced)
      throw ConvergenceError("legendre_inverse: damped step could not reduce the residual",
                             rn);
  }
  throw ConvergenceError("legendre_inverse: no convergence within max_iter",
                         res.inf_norm());
}

HyperregularityReport hyperregularity_probe(
    const LagrangianSystem& sys, const std::vector<std::pair<Point, Vector>>& samples,
    double cond_max) {
  HyperregularityReport rep;
  for (size_t i = 0; i < samples.size(); ++i) {
    const SquareMatrix j = hessian_vv(sys.L, samples[i].first, samples[i].second, 0.0);
    HyperregularitySample s{static_cast<int>(i), false, 0.0};
    s.condition = condition_inf(j);
    s.singular = !std::isfinite(s.condition);
    const bool fail = s.singular || s.condition > cond_max;
    if (fail && rep.hyperregular) {
      rep.hyperregular = false;
      rep.witness = s.index;
    }
    rep.samples.push_back(s);
  }
  return rep;
}

double hamiltonian_value(const LagrangianSystem& sys, const Point& q, const Covector& p,
                         double tol) {
  const Vector rho = legendre_inverse(sys, q, p, Vector::zero(sys.space.dim), tol);
  return energy(sys, q, p, rho);
}

HamiltonianSystem HamiltonianSystem::derived(const LagrangianSystem& sys,
                                             double newton_tol) {
  HamiltonianSystem h;
  h.dim_ = sys.space.dim;
  h.provenance_ = Provenance::kDerivedFromLagrangian;
  auto shared = std::make_shared<LagrangianSystem>(sys);
  h.value_ = [shared, newton_tol](const Point& q, const Covector& p) {
    return hamiltonian_value(*shared, q, p, newton_tol);
  };
  // Stationarity shortcut: on the critical set the qdot-slot derivative of E
  // vanishes, so only the explicit dependence survives.
  h.dq_ = [shared, newton_tol](const Point& q, const Covector& p) {
    const Vector rho =
        legendre_inverse(*shared, q, p, Vector::zero(shared->space.dim), newton_tol);
    return -shared->dq(q, rho);
  };
  h.dp_ = [shared, newton_tol](const Point& q, const Covector& p) {
    return legendre_inverse(*shared, q, p, Vector::zero(shared->space.dim), newton_tol);
  };
  return h;
}

HamiltonianSystem HamiltonianSystem::user_supplied(int dim, ValueFn h, GradQFn dq,
                                                   GradPFn dp) {
  HamiltonianSystem out;
  out.dim_ = dim;
  out.provenance_ = Provenance::kUserSupplied;
  out.value_ = std::move(h);
  out.dq_ = std::move(dq);
  out.dp_ = std::move(dp);
  return out;
}

HamiltonianMembershipReport hamiltonian_membership(const HamiltonianSystem& ham,
                                                   const PhasePoint4& x, double tol) {
  HamiltonianMembershipReport rep;
  rep.r_residual = (ham.dq(x.q, x.p) + x.r).inf_norm();
  rep.qdot_residual = (ham.dp(x.q, x.p) - x.qdot).inf_norm();
  rep.member = rep.r_residual <= tol && rep.qdot_residual <= tol;
  return rep;
}

std::pair<Covector, Vector> hamilton_residuals(const HamiltonianSystem& ham,
                                               const PhaseTrajectory& traj, double t) {
  const Point q = traj.xi.at(t);
  const Covector p = traj.pi.at(t);
  const Covector first = ham.dq(q, p) - (traj.phi.at(t) - traj.pi.derivative(t));
  const Vector second = ham.dp(q, p) - traj.xi.velocity(t);
  return {first, second};
}

GeneratingFamilyReport generating_family_membership(const LagrangianSystem& sys,
                                                    const PhasePoint4& x, double tol) {
  const double newton_tol = std::min(1e-12, tol * 1e-3);
  const Vector rho =
      legendre_inverse(sys, x.q, x.p, Vector::zero(sys.space.dim), newton_tol);
  GeneratingFamilyReport rep;
  // Basis probes of the generating identity: dq directions pin r, dp
  // directions pin qdot, dv directions pin the critical-set relation.
  rep.r_residual = (sys.dq(x.q, rho) - x.r).inf_norm();
  rep.qdot_residual = (x.qdot - rho).inf_norm();
  rep.critical_residual = (x.p - legendre(sys, x.q, rho)).inf_norm();
  rep.member = rep.r_residual <= tol && rep.qdot_residual <= tol &&
               rep.critical_residual <= tol;
  return rep;
}

std::pair<Covector, Vector> hamiltonian_partials_dual(const LagrangianSystem& sys,
                                                      const Point& q, const Covector& p,
                                                      double tol) {
  const int n = sys.space.dim;
  std::vector<double> grad_q(n), grad_p(n);

  // Solve rho once in plain arithmetic, then rerun the Newton update in dual
  // arithmetic per direction of (q, p): the value part stays put while the
  // dual part settles onto the implicit derivative within a few iterations.
  const Vector v0 = legendre_inverse(sys, q, p, Vector::zero(n), tol);
  const LuFactors lu = lu_factor(hessian_vv(sys.L, q, v0, 0.0));

  for (int dir = 0; dir < 2 * n; ++dir) {
    std::vector<Dual1> qd(n), pd(n), v(n);
    for (int i = 0; i < n; ++i) {
      qd[i] = Dual1(q[i], dir == i ? 1.0 : 0.0);
      pd[i] = Dual1(p[i], dir == n + i ? 1.0 : 0.0);
      v[i] = Dual1(v0[i], 0.0);
    }

    for (int iter = 0; iter < 4; ++iter) {
      const std::vector<Dual1> lambda = partial_qdot_dual(sys.L, qd, v, 0.0);
      std::vector<double> rv(n), rd(n);
      for (int i = 0; i < n; ++i) {
        rv[i] = -(lambda[i].val - pd[i].val);
        rd[i] = -(lambda[i].der - pd[i].der);
      }
      const std::vector<double> dv = lu_solve(lu, rv);
      const std::vector<double> dd = lu_solve(lu, rd);
      for (int i = 0; i < n; ++i) {
        v[i].val += dv[i];
        v[i].der += dd[i];
      }
    }

    // H = <p, v> - L(q, v) in dual arithmetic.
    Dual1 h(0.0);
    for (int i = 0; i < n; ++i) h = h + pd[i] * v[i];
    h = h - sys.L.eval_dual(qd, v, 0.0);
    if (dir < n)
      grad_q[dir] = h.der;
    else
      grad_p[dir - n] = h.der;
  }
  return {Covector(std::move(grad_q)), Vector(std::move(grad_p))};
}

}  // namespace varmech
