#pragma once

#include "varmech/affine.hpp"
#include "varmech/curve.hpp"

namespace varmech {

/// A motion: a differentiable curve in Q over a closed interval, carrying its
/// interval with it. Closed-form motions hold exact value/derivative maps;
/// grid motions interpolate with C1 cubic Hermite pieces.
class Motion {
 public:
  static Motion closed_form(TimeInterval iv, int dim, std::function<Point(double)> value,
                            std::function<Vector(double)> velocity);
  /// Grid nodes at t0 + i*h. Velocities are optional: when absent they are
  /// computed by 4th-order finite differences (one-sided at the ends).
  static Motion from_grid(TimeInterval iv, const std::vector<Point>& points,
                          const std::vector<Vector>* velocities = nullptr);
  /// Constant motion, held at one configuration.
  static Motion constant(TimeInterval iv, const Point& q);

  Point at(double t) const;
  Vector velocity(double t) const;
  /// Cheap view of the motion on [a, b] (no resampling).
  Motion restrict(double a, double b) const;

  const TimeInterval& interval() const { return core_->interval(); }
  int dim() const { return core_->dim(); }
  std::optional<double> grid_step() const { return core_->grid_step(); }
  const detail::CorePtr& core() const { return core_; }

  explicit Motion(detail::CorePtr core) : core_(std::move(core)) {}

 private:
  detail::CorePtr core_;
};

/// A displacement (variation): a curve in V over the same interval as the
/// motion it varies. No endpoint conditions are imposed anywhere.
class Displacement {
 public:
  static Displacement closed_form(TimeInterval iv, int dim,
                                  std::function<Vector(double)> value,
                                  std::function<Vector(double)> derivative);
  static Displacement from_grid(TimeInterval iv, const std::vector<Vector>& values,
                                const std::vector<Vector>* derivatives = nullptr);
  static Displacement zero(TimeInterval iv, int dim);
  static Displacement constant(TimeInterval iv, const Vector& v);
  /// Polynomial in normalized time u = (t - t0)/(t1 - t0):
  /// d(t) = sum_k coeffs[k] * u^k, with the exact derivative.
  static Displacement polynomial(TimeInterval iv, std::vector<Vector> coeffs);

  Vector at(double t) const;
  Vector derivative(double t) const;
  Displacement restrict(double a, double b) const;

  const TimeInterval& interval() const { return core_->interval(); }
  int dim() const { return core_->dim(); }
  std::optional<double> grid_step() const { return core_->grid_step(); }

  explicit Displacement(detail::CorePtr core) : core_(std::move(core)) {}

 private:
  detail::CorePtr core_;
};

/// A V*-valued curve (external forces, momenta, sampled velocity gradients).
class CovectorCurve {
 public:
  static CovectorCurve closed_form(TimeInterval iv, int dim,
                                   std::function<Covector(double)> value,
                                   std::function<Covector(double)> derivative);
  static CovectorCurve from_grid(TimeInterval iv, const std::vector<Covector>& values,
                                 const std::vector<Covector>* derivatives = nullptr);
  static CovectorCurve zero(TimeInterval iv, int dim);
  static CovectorCurve constant(TimeInterval iv, const Covector& f);

  Covector at(double t) const;
  Covector derivative(double t) const;
  CovectorCurve restrict(double a, double b) const;

  const TimeInterval& interval() const { return core_->interval(); }
  int dim() const { return core_->dim(); }
  std::optional<double> grid_step() const { return core_->grid_step(); }
  const detail::CorePtr& core() const { return core_; }

  explicit CovectorCurve(detail::CorePtr core) : core_(std::move(core)) {}

 private:
  detail::CorePtr core_;
};

/// Covector triple dual to displacements over a finite interval: an external
/// force curve plus initial and final momenta.
struct CovectorTriple {
  CovectorCurve phi;
  Covector p0;
  Covector p1;
};

/// Velocity of a motion at time t.
Vector velocity(const Motion& m, double t);

/// Duality pairing of a covector triple with a displacement over their shared
/// interval [t0, t1]:
///   -integral of <phi, d> + <p1, d(t1)> - <p0, d(t0)>.
/// Bilinear; throws DomainError on an interval mismatch.
double triple_pairing(const CovectorTriple& c, const Displacement& d,
                      double quad_tol = 1e-10);

/// The varied motion t -> m(t) + s*d(t). Closed forms combine into a closed
/// form; when a grid is involved the result is resampled on the densest grid
/// present (the sparser operand is Hermite-evaluated).
Motion perturb(const Motion& m, const Displacement& d, double s);

}  // namespace varmech
