#include "varmech/field.hpp"

#include <cmath>
#include <memory>

#include "varmech/error.hpp"

namespace varmech {

namespace {

// Optimal central-difference step for a coordinate of magnitude |x|.
double fd_step(double x) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, std::abs(x));
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

ScalarField ScalarField::from_expression(const Expression& e, ParamMap params,
                                         GradMode mode) {
  ScalarField s;
  s.dim_ = e.dim();
  s.autonomous_ = !e.uses_time();
  s.velocity_dependent_ = e.uses_velocity();
  s.mode_ = mode;
  auto expr = std::make_shared<Expression>(e);
  auto pm = std::make_shared<ParamMap>(std::move(params));
  s.eval_d_ = [expr, pm](std::span<const double> q, std::span<const double> v, double t) {
    return expr->eval<double>(q, v, t, *pm);
  };
  s.eval_1_ = [expr, pm](std::span<const Dual1> q, std::span<const Dual1> v, double t) {
    return expr->eval<Dual1>(q, v, t, *pm);
  };
  s.eval_2_ = [expr, pm](std::span<const Dual2> q, std::span<const Dual2> v, double t) {
    return expr->eval<Dual2>(q, v, t, *pm);
  };
  return s;
}

ScalarField ScalarField::with_analytic_partials(GradFn grad_q, GradFn grad_qdot) const {
  ScalarField s(*this);
  s.grad_q_ = std::move(grad_q);
  s.grad_qdot_ = std::move(grad_qdot);
  s.mode_ = GradMode::kAnalytic;
  return s;
}

ScalarField ScalarField::with_mode(GradMode mode) const {
  ScalarField s(*this);
  s.mode_ = mode;
  return s;
}

double ScalarField::value(const Point& q, const Vector& qdot, double t) const {
  if (q.dim() != dim_ || qdot.dim() != dim_)
    throw DimensionError("ScalarField::value: dimension mismatch");
  return eval_d_(q.coords(), qdot.comps(), t);
}

Dual1 ScalarField::eval_dual(std::span<const Dual1> q, std::span<const Dual1> v,
                             double t) const {
  if (!eval_1_) throw Error("field has no dual-number channel");
  return eval_1_(q, v, t);
}

Dual2 ScalarField::eval_dual2(std::span<const Dual2> q, std::span<const Dual2> v,
                              double t) const {
  if (!eval_2_) throw Error("field has no second-order dual channel");
  return eval_2_(q, v, t);
}

namespace {

// Gradient in the chosen slot via one dual evaluation per coordinate.
Covector grad_dual(const ScalarField& f, std::span<const double> q,
                   std::span<const double> v, double t, bool velocity_slot) {
  const int n = f.dim();
  std::vector<Dual1> qd(q.begin(), q.end());
  std::vector<Dual1> vd(v.begin(), v.end());
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    auto& slot = velocity_slot ? vd[i] : qd[i];
    slot.der = 1.0;
    g[i] = f.eval_dual(qd, vd, t).der;
    slot.der = 0.0;
  }
  return Covector(std::move(g));
}

Covector grad_fd(const ScalarField& f, std::span<const double> q,
                 std::span<const double> v, double t, bool velocity_slot) {
  const int n = f.dim();
  std::vector<double> qs = to_vec(q);
  std::vector<double> vs = to_vec(v);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double& x = velocity_slot ? vs[i] : qs[i];
    const double x0 = x;
    const double h = fd_step(x0);
    x = x0 + h;
    const double fp = f.eval_raw(qs, vs, t);
    x = x0 - h;
    const double fm = f.eval_raw(qs, vs, t);
    x = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return Covector(std::move(g));
}

Covector grad(const ScalarField& f, const Point& q, const Vector& qdot, double t,
              bool velocity_slot) {
  if (q.dim() != f.dim() || qdot.dim() != f.dim())
    throw DimensionError("partial derivative: dimension mismatch");
  const auto& analytic = velocity_slot ? f.analytic_grad_qdot() : f.analytic_grad_q();
  if (f.mode() == GradMode::kAnalytic && analytic) return analytic(q, qdot, t);
  if (f.mode() != GradMode::kFiniteDifference && f.has_dual_channel())
    return grad_dual(f, q.coords(), qdot.comps(), t, velocity_slot);
  return grad_fd(f, q.coords(), qdot.comps(), t, velocity_slot);
}

SquareMatrix hessian_dual2(const ScalarField& f, std::span<const double> q,
                           std::span<const double> v, double t, bool velocity_slot) {
  const int n = f.dim();
  SquareMatrix h(n);
  std::vector<Dual2> qd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    qd[i] = Dual2(Dual1(q[i]), Dual1(0.0));
    vd[i] = Dual2(Dual1(v[i]), Dual1(0.0));
  }
  auto& slot = velocity_slot ? vd : qd;
  for (int j = 0; j < n; ++j) {
    slot[j].der = Dual1(1.0);  // outer direction e_j
    for (int i = 0; i < n; ++i) {
      slot[i].val.der = 1.0;  // inner direction e_i
      h.at(i, j) = f.eval_dual2(qd, vd, t).der.der;
      slot[i].val.der = 0.0;
    }
    slot[j].der = Dual1(0.0);
  }
  return h;
}

SquareMatrix hessian_fd(const ScalarField& f, std::span<const double> q,
                        std::span<const double> v, double t, bool velocity_slot) {
  // Finite difference of the finite-difference gradient; fallback for fields
  // without a dual channel.
  const int n = f.dim();
  SquareMatrix h(n);
  std::vector<double> qs = to_vec(q);
  std::vector<double> vs = to_vec(v);
  for (int j = 0; j < n; ++j) {
    double& x = velocity_slot ? vs[j] : qs[j];
    const double x0 = x;
    const double step = std::sqrt(fd_step(x0));  // larger step for 2nd-order FD
    x = x0 + step;
    const Covector gp = grad_fd(f, qs, vs, t, velocity_slot);
    x = x0 - step;
    const Covector gm = grad_fd(f, qs, vs, t, velocity_slot);
    x = x0;
    for (int i = 0; i < n; ++i) h.at(i, j) = (gp[i] - gm[i]) / (2.0 * step);
  }
  return h;
}

}  // namespace

Covector partial_q(const ScalarField& f, const Point& q, const Vector& qdot, double t) {
  return grad(f, q, qdot, t, /*velocity_slot=*/false);
}

Covector partial_qdot(const ScalarField& f, const Point& q, const Vector& qdot, double t) {
  return grad(f, q, qdot, t, /*velocity_slot=*/true);
}

Covector partial_q_fd(const ScalarField& f, const Point& q, const Vector& qdot, double t) {
  return grad_fd(f, q.coords(), qdot.comps(), t, false);
}

Covector partial_qdot_fd(const ScalarField& f, const Point& q, const Vector& qdot,
                         double t) {
  return grad_fd(f, q.coords(), qdot.comps(), t, true);
}

double directional(const ScalarField& f, const Point& q, const Vector& qdot, double t,
                   const Vector& dq, const Vector& dqdot) {
  return pair(partial_q(f, q, qdot, t), dq) + pair(partial_qdot(f, q, qdot, t), dqdot);
}

SquareMatrix hessian_qq(const ScalarField& f, const Point& q, const Vector& qdot,
                        double t) {
  if (f.has_dual_channel()) return hessian_dual2(f, q.coords(), qdot.comps(), t, false);
  return hessian_fd(f, q.coords(), qdot.comps(), t, false);
}

SquareMatrix hessian_vv(const ScalarField& f, const Point& q, const Vector& qdot,
                        double t) {
  if (f.has_dual_channel()) return hessian_dual2(f, q.coords(), qdot.comps(), t, true);
  return hessian_fd(f, q.coords(), qdot.comps(), t, true);
}

std::vector<Dual1> partial_qdot_dual(const ScalarField& f, std::span<const Dual1> q,
                                     std::span<const Dual1> qdot, double t) {
  const int n = f.dim();
  std::vector<Dual2> qd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    qd[i] = Dual2(q[i], Dual1(0.0));
    vd[i] = Dual2(qdot[i], Dual1(0.0));
  }
  std::vector<Dual1> lambda(n);
  for (int i = 0; i < n; ++i) {
    vd[i].der = Dual1(1.0);
    lambda[i] = f.eval_dual2(qd, vd, t).der;
    vd[i].der = Dual1(0.0);
  }
  return lambda;
}

}  // namespace varmech
