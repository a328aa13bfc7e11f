#pragma once

#include "varmech/hamiltonian.hpp"

namespace varmech {

/// Integrates the first-order Lagrange equations
///   xidot = rho(xi, pi),   pidot = dL/dq(xi, rho(xi, pi)) + phi(t)
/// with classical fixed-step RK4 (steps >= 8), producing a phase trajectory
/// whose motion and momentum grids carry the exact stage derivatives. The
/// Lagrangian must be hyperregular along the way: every stage goes through
/// the Legendre inverse, and its failures propagate.
PhaseTrajectory solve_forward(const LagrangianSystem& sys, const Point& q0,
                              const Covector& p0, const CovectorCurve& phi, double t0,
                              double t1, int steps);

struct ConsistencyReport {
  bool interval_ok = true;  // channel (a): membership on every listed subinterval
  bool dirac_ok = true;     // channel (b): pointwise infinitesimal membership
  bool channels_agree = true;
  double interval_worst = 0.0;  // worst residual seen by channel (a)
  double dirac_worst = 0.0;     // worst residual seen by channel (b)

  bool consistent() const { return interval_ok && dirac_ok; }
};

/// Cross-checks the two descriptions of dynamics on one trajectory:
/// (a) for every listed subinterval, membership of the restricted motion with
///     momenta read off pi at the subinterval ends;
/// (b) membership of (xi, pi, xidot, pidot - phi)(t) in the infinitesimal
///     dynamics on a dense time grid.
/// The two channels must agree; the report records both verdicts.
ConsistencyReport script_D_consistency(const LagrangianSystem& sys,
                                       const PhaseTrajectory& traj,
                                       const std::vector<TimeInterval>& subintervals,
                                       double tol, int dirac_grid = 257);

}  // namespace varmech
