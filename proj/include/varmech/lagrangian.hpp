#pragma once

#include <cstdint>

#include "varmech/field.hpp"
#include "varmech/trajectory.hpp"

namespace varmech {

/// An autonomous Lagrangian L: Q x V -> R.
struct LagrangianSystem {
  LagrangianSystem(ScalarField lagrangian, AffineSpace space_);

  ScalarField L;
  AffineSpace space;

  double value(const Point& q, const Vector& qdot) const { return L.value(q, qdot, 0.0); }
  Covector dq(const Point& q, const Vector& qdot) const { return partial_q(L, q, qdot, 0.0); }
  Covector dv(const Point& q, const Vector& qdot) const { return partial_qdot(L, q, qdot, 0.0); }
};

/// A phase space trajectory (xi, phi, pi): configuration, external force and
/// momentum curves over a shared interval.
struct PhaseTrajectory {
  Motion xi;
  CovectorCurve phi;
  CovectorCurve pi;
};

/// The action W(xi|[t0,t1]) = integral of L along the motion.
double action(const LagrangianSystem& sys, const Motion& m, double quad_tol = 1e-10);

/// Derivative of the action in the direction of a displacement, evaluated in
/// its direct form: integral of <dL/dq, d> + <dL/dqdot, ddot>.
double action_derivative_direct(const LagrangianSystem& sys, const Motion& m,
                                const Displacement& d, double quad_tol = 1e-10);

/// Same quantity after integration by parts:
///   integral of <dL/dq - d/dt(dL/dqdot), d> + boundary terms,
/// where d/dt(dL/dqdot) comes from Hermite-differentiating a dense sampling of
/// the momentum along the motion. Agreement with the direct form is a
/// cross-check of the whole derivative pipeline, not a tautology.
double action_derivative_by_parts(const LagrangianSystem& sys, const Motion& m,
                                  const Displacement& d, double quad_tol = 1e-10);

/// dL/dqdot along the motion, sampled densely and wrapped as a curve whose
/// derivative channel provides d/dt(dL/dqdot). Panels defaults to 4x the
/// motion grid (512 for closed forms).
CovectorCurve sampled_momentum_curve(const LagrangianSystem& sys, const Motion& m,
                                     int panels = 0);

/// Euler-Lagrange residual at time t:
///   d/dt(dL/dqdot ∘ (xi, xidot)) - dL/dq ∘ (xi, xidot) - phi(t).
Covector el_residual(const LagrangianSystem& sys, const Motion& m,
                     const CovectorCurve& phi, double t);

/// The momentum-velocity relation dL/dqdot(xi(t), xidot(t)).
Covector momentum(const LagrangianSystem& sys, const Motion& m, double t);

struct DynamicsReport {
  bool member = false;
  double el_max = 0.0;       // sup of the Euler-Lagrange residual over the grid
  double p0_residual = 0.0;  // |momentum(t0) - p0|
  double p1_residual = 0.0;  // |momentum(t1) - p1|
};

/// Membership of (motion, covector triple) in the dynamics of the interval,
/// decided through the residual decomposition: Euler-Lagrange equations
/// inside the interval plus the two momentum-velocity relations at its ends.
DynamicsReport dynamics_membership(const LagrangianSystem& sys, const Motion& m,
                                   const CovectorTriple& c, double tol);

struct VariationalReport {
  bool member = false;
  double max_mismatch = 0.0;
  int witness_trial = -1;  // first failing probe, -1 if none
};

/// Membership probed directly from the virtual action principle: for random
/// polynomial displacements d, compare the triple pairing against the action
/// derivative. Entirely independent of the Euler-Lagrange residual channel.
VariationalReport variational_membership(const LagrangianSystem& sys, const Motion& m,
                                         const CovectorTriple& c, int trials,
                                         std::uint64_t seed, double tol);

/// Lagrange-equation residuals of a phase trajectory at time t:
///   (dL/dq ∘ (xi, xidot) - (pidot - phi),  dL/dqdot ∘ (xi, xidot) - pi).
std::pair<Covector, Covector> lagrange_residuals(const LagrangianSystem& sys,
                                                 const PhaseTrajectory& traj, double t);

/// Energy along a phase point, <pi, xidot> - L. Declared here for the
/// conservation checks; the Hamiltonian layer builds on it.
double energy_along(const LagrangianSystem& sys, const PhaseTrajectory& traj, double t);

namespace detail {
/// Deterministic uniform double in [lo, hi) from a 64-bit generator state.
/// Hand-rolled so that seeded results are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next_u64();
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

/// Random polynomial displacement of degree <= 5 with coefficients in
/// [-1, 1]^dim, in normalized time.
Displacement random_polynomial_displacement(Rng& rng, TimeInterval iv, int dim,
                                            int max_degree = 5);
}  // namespace detail

}  // namespace varmech
