#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "varmech/affine.hpp"
#include "varmech/dual.hpp"
#include "varmech/expression.hpp"

namespace varmech {

/// How partial derivatives of a field are produced by default.
/// The finite-difference channel always exists in parallel as an independent
/// cross-check regardless of the mode.
enum class GradMode {
  kAnalytic,          // caller-supplied closed-form partials
  kDualNumber,        // forward-mode evaluation over the evaluator
  kFiniteDifference,  // central differences, step cbrt(eps)*max(1,|x|)
};

/// A differentiable scalar field on Q x V x R. Evaluation is pure; the field
/// is immutable after construction and safe to share across threads.
///
/// Fields built from a generic callable or an Expression can be evaluated with
/// dual-number scalars, which is what the dual-number gradient and Hessian
/// channels use. Fields built from a double-only callable fall back to finite
/// differences for every derivative.
class ScalarField {
 public:
  using GradFn = std::function<Covector(const Point&, const Vector&, double)>;

  template <class F>
  static ScalarField from_callable(int dim, F f, bool autonomous, bool velocity_dependent,
                                   GradMode mode = GradMode::kDualNumber) {
    ScalarField s;
    s.dim_ = dim;
    s.autonomous_ = autonomous;
    s.velocity_dependent_ = velocity_dependent;
    s.mode_ = mode;
    s.eval_d_ = [f](std::span<const double> q, std::span<const double> v, double t) {
      return f(q, v, t);
    };
    s.eval_1_ = [f](std::span<const Dual1> q, std::span<const Dual1> v, double t) {
      return f(q, v, t);
    };
    s.eval_2_ = [f](std::span<const Dual2> q, std::span<const Dual2> v, double t) {
      return f(q, v, t);
    };
    return s;
  }

  /// For evaluators that only support double arithmetic. Derivative channels
  /// all reduce to finite differences.
  template <class F>
  static ScalarField from_double_callable(int dim, F f, bool autonomous,
                                          bool velocity_dependent) {
    ScalarField s;
    s.dim_ = dim;
    s.autonomous_ = autonomous;
    s.velocity_dependent_ = velocity_dependent;
    s.mode_ = GradMode::kFiniteDifference;
    s.eval_d_ = [f](std::span<const double> q, std::span<const double> v, double t) {
      return f(q, v, t);
    };
    return s;
  }

  static ScalarField from_expression(const Expression& e, ParamMap params,
                                     GradMode mode = GradMode::kDualNumber);

  /// Attaches closed-form partials and switches the default mode to analytic.
  ScalarField with_analytic_partials(GradFn grad_q, GradFn grad_qdot) const;

  /// Same field with a different default derivative channel. Forcing
  /// kDualNumber on a field that carries analytic partials routes every
  /// derivative through forward-mode evaluation instead, which is how the
  /// cross-check suites avoid comparing a closed form against itself.
  ScalarField with_mode(GradMode mode) const;

  int dim() const { return dim_; }
  bool autonomous() const { return autonomous_; }
  bool velocity_dependent() const { return velocity_dependent_; }
  GradMode mode() const { return mode_; }
  bool has_dual_channel() const { return static_cast<bool>(eval_1_); }

  double value(const Point& q, const Vector& qdot, double t) const;

  double eval_raw(std::span<const double> q, std::span<const double> v, double t) const {
    return eval_d_(q, v, t);
  }
  Dual1 eval_dual(std::span<const Dual1> q, std::span<const Dual1> v, double t) const;
  Dual2 eval_dual2(std::span<const Dual2> q, std::span<const Dual2> v, double t) const;

  const GradFn& analytic_grad_q() const { return grad_q_; }
  const GradFn& analytic_grad_qdot() const { return grad_qdot_; }

 private:
  ScalarField() = default;

  int dim_ = 0;
  bool autonomous_ = true;
  bool velocity_dependent_ = true;
  GradMode mode_ = GradMode::kDualNumber;
  std::function<double(std::span<const double>, std::span<const double>, double)> eval_d_;
  std::function<Dual1(std::span<const Dual1>, std::span<const Dual1>, double)> eval_1_;
  std::function<Dual2(std::span<const Dual2>, std::span<const Dual2>, double)> eval_2_;
  GradFn grad_q_;
  GradFn grad_qdot_;
};

/// Partial derivative with respect to the point slot, as a covector:
/// <partial_q(f), dq> = d/ds f(q + s dq, qdot, t) at s = 0.
Covector partial_q(const ScalarField& f, const Point& q, const Vector& qdot, double t);

/// Partial derivative with respect to the velocity slot.
Covector partial_qdot(const ScalarField& f, const Point& q, const Vector& qdot, double t);

// Central finite-difference versions; independent of the default channel and
// used as the disagreement detector in the invariant tests.
Covector partial_q_fd(const ScalarField& f, const Point& q, const Vector& qdot, double t);
Covector partial_qdot_fd(const ScalarField& f, const Point& q, const Vector& qdot, double t);

/// Total directional derivative <partial_q, dq> + <partial_qdot, dqdot>.
double directional(const ScalarField& f, const Point& q, const Vector& qdot, double t,
                   const Vector& dq, const Vector& dqdot);

/// Second derivatives via nested dual numbers (finite differences of the
/// gradient for double-only fields).
SquareMatrix hessian_qq(const ScalarField& f, const Point& q, const Vector& qdot, double t);
SquareMatrix hessian_vv(const ScalarField& f, const Point& q, const Vector& qdot, double t);

/// The velocity gradient evaluated in dual arithmetic: each component of the
/// result carries the value of dL/dqdot_i and its derivative along whatever
/// direction the dual parts of (q, qdot) encode. Used to run Newton solves in
/// dual arithmetic for cross-check purposes.
std::vector<Dual1> partial_qdot_dual(const ScalarField& f, std::span<const Dual1> q,
                                     std::span<const Dual1> qdot, double t);

}  // namespace varmech
