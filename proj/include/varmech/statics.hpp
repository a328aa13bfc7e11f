#pragma once

#include "varmech/field.hpp"

namespace varmech {

/// A static mechanical system: an internal energy U on the configuration
/// space. The energy field must be autonomous and velocity-independent.
struct StaticSystem {
  StaticSystem(ScalarField energy_field, AffineSpace space_);

  ScalarField energy;
  AffineSpace space;

  double energy_at(const Point& q) const {
    return energy.value(q, Vector::zero(space.dim), 0.0);
  }
};

/// A configuration under an external control force: the candidate pairs the
/// constitutive set selects from.
struct ControlledState {
  Point q;
  Covector f;
};

/// Derivative of the internal energy in the direction dq:
/// du(q, dq) = d/ds U(q + s dq) at s = 0. Linear in dq.
double du(const StaticSystem& sys, const Point& q, const Vector& dq);

/// Gradient of the internal energy at q (the force the system exerts).
Covector energy_gradient(const StaticSystem& sys, const Point& q);

/// Inf-norm distance between the energy gradient at q and the control force
/// f. Zero exactly when (q, f) lies in the constitutive set: the pair
/// satisfies <f, dq> = du(q, dq) for every dq.
double constitutive_residual(const StaticSystem& sys, const Point& q, const Covector& f);

/// Thresholded membership test for the constitutive set.
bool constitutive_member(const StaticSystem& sys, const Point& q, const Covector& f,
                         double tol);
bool constitutive_member(const StaticSystem& sys, const ControlledState& state,
                         double tol);

struct EquilibriumResult {
  Point q;
  double residual;
  int iterations;
};

/// Finds q with constitutive_residual(sys, q, f) <= tol by Newton iteration
/// on the residual with a backtracking line search; the Hessian of U comes
/// from the dual-number channel. This inverts the constitutive relation, so
/// it lands on stationary points of U - <f, .>, not only minima.
///
/// Throws ConvergenceError (carrying the final residual) or
/// SingularMatrixError when a singular Hessian blocks the iteration.
EquilibriumResult solve_equilibrium(const StaticSystem& sys, const Covector& f,
                                    const Point& q_init, double tol = 1e-10,
                                    int max_iter = 50);

}  // namespace varmech
