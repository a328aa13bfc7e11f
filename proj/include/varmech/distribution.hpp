#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "varmech/lagrangian.hpp"

namespace varmech {

/// A compactly supported distribution on the time axis: either the indicator
/// of a closed interval or the Dirac delta at a point. These are the two
/// variants the unified pairing actually uses; anything richer (derivatives
/// of deltas, smooth densities) is an explicit extension point left unbuilt.
class Distribution {
 public:
  enum class Kind { kInterval, kDirac };

  static Distribution interval(double t0, double t1);
  static Distribution dirac(double t);

  /// Parses the literal syntax "interval(t0,t1)" / "dirac(t)".
  static Distribution parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// Interval bounds (kInterval only).
  const TimeInterval& bounds() const;
  /// Location of the delta (kDirac only).
  double point() const;

  /// Smallest closed interval containing the support.
  TimeInterval support_hull() const;

  std::string str() const;

 private:
  Distribution() = default;
  Kind kind_ = Kind::kInterval;
  TimeInterval iv_{0.0, 1.0};
  double t_ = 0.0;
};

/// Integration against the distribution: the plain integral over an interval,
/// or evaluation at the point for a Dirac delta.
double integrate(const Distribution& c, const std::function<double(double)>& h,
                 double tol = 1e-10);

/// The unified covector pairing
///   <(phi, pi | c), (d | c)> = integral_c ( <pidot - phi, d> + <pi, ddot> ).
/// For the Dirac variant the integrand is simply evaluated at the point.
/// Throws DomainError when the support is not covered by every curve domain.
double unified_pairing(const CovectorCurve& phi, const CovectorCurve& pi,
                       const Distribution& c, const Displacement& d,
                       double tol = 1e-10);

struct EquivalenceReport {
  bool equivalent = true;
  double max_difference = 0.0;
  /// Witnessing displacement when not equivalent.
  std::optional<Displacement> witness;
};

/// Tests whether (phi, pi) and (phi2, pi2) represent the same covector over
/// the distribution c, by probing the defining identity with random
/// polynomial displacements (degree <= 5, coefficients in [-1,1]^dim). A
/// probe predicate, not a proof: polynomial probes of low degree detect every
/// failure in the smooth regime and the first witness is reported.
EquivalenceReport covector_equivalent(const CovectorCurve& phi, const CovectorCurve& pi,
                                      const CovectorCurve& phi2, const CovectorCurve& pi2,
                                      const Distribution& c, int trials,
                                      std::uint64_t seed, double tol);

/// A point probed for membership in the infinitesimal dynamics:
/// (q, p, qdot, r) with r read as pidot(t) - phi(t).
struct PhasePoint4 {
  Point q;
  Covector p;
  Vector qdot;
  Covector r;
};

struct InfinitesimalReport {
  bool member = false;
  double r_residual = 0.0;  // |dL/dq(q, qdot) - r|
  double p_residual = 0.0;  // |dL/dqdot(q, qdot) - p|
};

/// Membership in the infinitesimal dynamics: dL/dq = r and dL/dqdot = p at
/// (q, qdot), each to within tol in the inf norm.
InfinitesimalReport infinitesimal_membership(const LagrangianSystem& sys,
                                             const PhasePoint4& x, double tol);

struct DiracReduction {
  Covector r;
  Covector p;
};

/// The covector data a Dirac delta extracts from a (force, momentum) pair:
/// (r, p) = (pidot(t) - phi(t), pi(t)). The r-sign convention lives here and
/// only here.
DiracReduction dirac_reduce(const CovectorCurve& phi, const CovectorCurve& pi, double t);

}  // namespace varmech
