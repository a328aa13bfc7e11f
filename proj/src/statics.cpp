#include "varmech/statics.hpp"

#include <cmath>

#include "varmech/error.hpp"

namespace varmech {

StaticSystem::StaticSystem(ScalarField energy_field, AffineSpace space_)
    : energy(std::move(energy_field)), space(space_) {
  if (energy.dim() != space.dim)
    throw DimensionError("StaticSystem: energy dimension does not match space");
  if (!energy.autonomous())
    throw ConfigError("StaticSystem: internal energy must not depend on time");
  if (energy.velocity_dependent())
    throw ConfigError("StaticSystem: internal energy must not depend on velocity");
}

double du(const StaticSystem& sys, const Point& q, const Vector& dq) {
  return pair(energy_gradient(sys, q), dq);
}

Covector energy_gradient(const StaticSystem& sys, const Point& q) {
  return partial_q(sys.energy, q, Vector::zero(sys.space.dim), 0.0);
}

double constitutive_residual(const StaticSystem& sys, const Point& q, const Covector& f) {
  return (energy_gradient(sys, q) - f).inf_norm();
}

bool constitutive_member(const StaticSystem& sys, const Point& q, const Covector& f,
                         double tol) {
  return constitutive_residual(sys, q, f) <= tol;
}

bool constitutive_member(const StaticSystem& sys, const ControlledState& state,
                         double tol) {
  return constitutive_member(sys, state.q, state.f, tol);
}

EquilibriumResult solve_equilibrium(const StaticSystem& sys, const Covector& f,
                                    const Point& q_init, double tol, int max_iter) {
  const int n = sys.space.dim;
  const Vector zero_v = Vector::zero(n);
  Point q = q_init;
  auto residual_at = [&](const Point& p) { return energy_gradient(sys, p) - f; };

  Covector res = residual_at(q);
  for (int iter = 0; iter < max_iter; ++iter) {
    const double rn = res.inf_norm();
    if (rn <= tol) return {q, rn, iter};

    const SquareMatrix hess = hessian_qq(sys.energy, q, zero_v, 0.0);
    LuFactors lu;
    try {
      lu = lu_factor(hess);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError("solve_equilibrium: singular Hessian at residual " +
                                std::to_string(rn));
    }
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -res[i];
    const Vector step(lu_solve(lu, rhs));

    // Backtracking on the residual norm.
    double s = 1.0;
    bool advanced = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Point trial = displace(q, step * s);
      const Covector trial_res = residual_at(trial);
      if (trial_res.inf_norm() < rn) {
        q = trial;
        res = trial_res;
        advanced = true;
        break;
      }
      s *= 0.5;
    }
    if (!advanced)
      throw ConvergenceError("solve_equilibrium: line search stalled", rn);
  }
  const double rn = res.inf_norm();
  if (rn <= tol) return {q, rn, max_iter};
  throw ConvergenceError("solve_equilibrium: no convergence within max_iter", rn);
}

}  // namespace varmech
