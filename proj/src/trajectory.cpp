#include "varmech/trajectory.hpp"

#include <cmath>

#include "varmech/error.hpp"
#include "varmech/quadrature.hpp"

namespace varmech {

namespace {

using detail::CorePtr;
using detail::CurveCore;

std::vector<double> to_raw(std::span<const double> s) { return {s.begin(), s.end()}; }

CurveCore::VecFn wrap_point(std::function<Point(double)> f) {
  return [f = std::move(f)](double t) {
    const Point p = f(t);
    return to_raw(p.coords());
  };
}

CurveCore::VecFn wrap_vector(std::function<Vector(double)> f) {
  if (!f) return {};
  return [f = std::move(f)](double t) {
    const Vector v = f(t);
    return to_raw(v.comps());
  };
}

CurveCore::VecFn wrap_covector(std::function<Covector(double)> f) {
  if (!f) return {};
  return [f = std::move(f)](double t) {
    const Covector v = f(t);
    return to_raw(v.comps());
  };
}

template <class T>
std::vector<std::vector<double>> rows_of(const std::vector<T>& xs, int dim,
                                         const char* what) {
  std::vector<std::vector<double>> rows;
  rows.reserve(xs.size());
  for (const T& x : xs) {
    if (x.dim() != dim) throw DimensionError(std::string(what) + ": row dimension mismatch");
    if constexpr (std::is_same_v<T, Point>)
      rows.push_back(to_raw(x.coords()));
    else
      rows.push_back(to_raw(x.comps()));
  }
  return rows;
}

}  // namespace

Motion Motion::closed_form(TimeInterval iv, int dim, std::function<Point(double)> value,
                           std::function<Vector(double)> velocity) {
  return Motion(CurveCore::closed_form(iv, dim, wrap_point(std::move(value)),
                                       wrap_vector(std::move(velocity))));
}

Motion Motion::from_grid(TimeInterval iv, const std::vector<Point>& points,
                         const std::vector<Vector>* velocities) {
  if (points.empty()) throw DomainError("Motion::from_grid: no nodes");
  const int dim = points.front().dim();
  std::optional<std::vector<std::vector<double>>> derivs;
  if (velocities) derivs = rows_of(*velocities, dim, "Motion velocities");
  return Motion(CurveCore::grid(iv, dim, rows_of(points, dim, "Motion points"),
                                std::move(derivs)));
}

Motion Motion::constant(TimeInterval iv, const Point& q) {
  const int n = q.dim();
  return closed_form(
      iv, n, [q](double) { return q; }, [n](double) { return Vector::zero(n); });
}

Point Motion::at(double t) const { return Point(core_->eval(t)); }
Vector Motion::velocity(double t) const { return Vector(core_->deriv(t)); }

Motion Motion::restrict(double a, double b) const {
  return Motion(CurveCore::view(core_, TimeInterval{a, b}));
}

Displacement Displacement::closed_form(TimeInterval iv, int dim,
                                       std::function<Vector(double)> value,
                                       std::function<Vector(double)> derivative) {
  return Displacement(CurveCore::closed_form(iv, dim, wrap_vector(std::move(value)),
                                             wrap_vector(std::move(derivative))));
}

Displacement Displacement::from_grid(TimeInterval iv, const std::vector<Vector>& values,
                                     const std::vector<Vector>* derivatives) {
  if (values.empty()) throw DomainError("Displacement::from_grid: no nodes");
  const int dim = values.front().dim();
  std::optional<std::vector<std::vector<double>>> derivs;
  if (derivatives) derivs = rows_of(*derivatives, dim, "Displacement derivatives");
  return Displacement(CurveCore::grid(iv, dim, rows_of(values, dim, "Displacement values"),
                                      std::move(derivs)));
}

Displacement Displacement::zero(TimeInterval iv, int dim) {
  return constant(iv, Vector::zero(dim));
}

Displacement Displacement::constant(TimeInterval iv, const Vector& v) {
  const int n = v.dim();
  return closed_form(
      iv, n, [v](double) { return v; }, [n](double) { return Vector::zero(n); });
}

Displacement Displacement::polynomial(TimeInterval iv, std::vector<Vector> coeffs) {
  if (coeffs.empty()) throw DomainError("Displacement::polynomial: no coefficients");
  const int n = coeffs.front().dim();
  for (const auto& c : coeffs)
    if (c.dim() != n) throw DimensionError("Displacement::polynomial: coefficient dims");
  const double t0 = iv.t0;
  const double scale = 1.0 / iv.span();
  auto value = [coeffs, t0, scale, n](double t) {
    const double u = (t - t0) * scale;
    Vector acc = Vector::zero(n);
    double uk = 1.0;
    for (const auto& c : coeffs) {
      acc = acc + c * uk;
      uk *= u;
    }
    return acc;
  };
  auto deriv = [coeffs, t0, scale, n](double t) {
    const double u = (t - t0) * scale;
    Vector acc = Vector::zero(n);
    double uk = 1.0;
    for (size_t k = 1; k < coeffs.size(); ++k) {
      acc = acc + coeffs[k] * (static_cast<double>(k) * uk);
      uk *= u;
    }
    return acc * scale;
  };
  return closed_form(iv, n, value, deriv);
}

Vector Displacement::at(double t) const { return Vector(core_->eval(t)); }
Vector Displacement::derivative(double t) const { return Vector(core_->deriv(t)); }

Displacement Displacement::restrict(double a, double b) const {
  return Displacement(CurveCore::view(core_, TimeInterval{a, b}));
}

CovectorCurve CovectorCurve::closed_form(TimeInterval iv, int dim,
                                         std::function<Covector(double)> value,
                                         std::function<Covector(double)> derivative) {
  return CovectorCurve(CurveCore::closed_form(iv, dim, wrap_covector(std::move(value)),
                                              wrap_covector(std::move(derivative))));
}

CovectorCurve CovectorCurve::from_grid(TimeInterval iv, const std::vector<Covector>& values,
                                       const std::vector<Covector>* derivatives) {
  if (values.empty()) throw DomainError("CovectorCurve::from_grid: no nodes");
  const int dim = values.front().dim();
  std::optional<std::vector<std::vector<double>>> derivs;
  if (derivatives) derivs = rows_of(*derivatives, dim, "CovectorCurve derivatives");
  return CovectorCurve(CurveCore::grid(iv, dim,
                                       rows_of(values, dim, "CovectorCurve values"),
                                       std::move(derivs)));
}

CovectorCurve CovectorCurve::zero(TimeInterval iv, int dim) {
  return constant(iv, Covector::zero(dim));
}

CovectorCurve CovectorCurve::constant(TimeInterval iv, const Covector& f) {
  const int n = f.dim();
  return closed_form(
      iv, n, [f](double) { return f; }, [n](double) { return Covector::zero(n); });
}

Covector CovectorCurve::at(double t) const { return Covector(core_->eval(t)); }
Covector CovectorCurve::derivative(double t) const { return Covector(core_->deriv(t)); }

CovectorCurve CovectorCurve::restrict(double a, double b) const {
  return CovectorCurve(CurveCore::view(core_, TimeInterval{a, b}));
}

Vector velocity(const Motion& m, double t) { return m.velocity(t); }

double triple_pairing(const CovectorTriple& c, const Displacement& d, double quad_tol) {
  if (c.phi.dim() != d.dim() || c.p0.dim() != d.dim() || c.p1.dim() != d.dim())
    throw DimensionError("triple_pairing: dimension mismatch");
  if (!same_interval(c.phi.interval(), d.interval()))
    throw DomainError("triple_pairing: interval mismatch");
  const TimeInterval iv = d.interval();
  const double integral = integrate_time(
      [&](double t) { return pair(c.phi.at(t), d.at(t)); }, iv.t0, iv.t1, quad_tol);
  return -integral + pair(c.p1, d.at(iv.t1)) - pair(c.p0, d.at(iv.t0));
}

Motion perturb(const Motion& m, const Displacement& d, double s) {
  if (m.dim() != d.dim()) throw DimensionError("perturb: dimension mismatch");
  if (!same_interval(m.interval(), d.interval()))
    throw DomainError("perturb: displacement interval differs from the motion's");
  const TimeInterval iv = m.interval();
  const int n = m.dim();

  const std::optional<double> hm = m.grid_step();
  const std::optional<double> hd = d.grid_step();
  if (!hm && !hd) {
    // Closed forms compose into a closed form.
    return Motion::closed_form(
        iv, n, [m, d, s](double t) { return displace(m.at(t), d.at(t) * s); },
        [m, d, s](double t) { return m.velocity(t) + d.derivative(t) * s; });
  }
  double h = hm ? *hm : *hd;
  if (hm && hd) h = std::min(*hm, *hd);
  const int panels = std::max(8, static_cast<int>(std::lround(iv.span() / h)));
  const double step = iv.span() / panels;
  std::vector<Point> points;
  std::vector<Vector> vels;
  points.reserve(panels + 1);
  vels.reserve(panels + 1);
  for (int i = 0; i <= panels; ++i) {
    const double t = (i == panels) ? iv.t1 : iv.t0 + i * step;
    points.push_back(displace(m.at(t), d.at(t) * s));
    vels.push_back(m.velocity(t) + d.derivative(t) * s);
  }
  return Motion::from_grid(iv, points, &vels);
}

}  // namespace varmech
