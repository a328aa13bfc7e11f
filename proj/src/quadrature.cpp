#include "varmech/quadrature.hpp"

#include <cmath>
#include <limits>

#include "varmech/error.hpp"

namespace varmech {

namespace {

constexpr int kMaxDepth = 40;

struct Gauss5 {
  double node[5];
  double weight[5];
  Gauss5() {
    const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    node[0] = -b; node[1] = -a; node[2] = 0.0; node[3] = a; node[4] = b;
    weight[0] = wb; weight[1] = wa; weight[2] = 128.0 / 225.0; weight[3] = wa; weight[4] = wb;
  }
};

double gl5(const std::function<double(double)>& h, double a, double b) {
  static const Gauss5 g;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += g.weight[i] * h(mid + half * g.node[i]);
  return s * half;
}

double adapt(const std::function<double(double)>& h, double a, double b, double whole,
             double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl5(h, a, mid);
  const double right = gl5(h, mid, b);
  const double split = left + right;
  const double err = std::abs(whole - split);
  // Roundoff floor: once the panel disagreement is at the noise level of the
  // estimate itself, refinement cannot improve it.
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(split) + 1.0);
  if (err <= std::max(tol, floor)) return split;
  if (depth >= kMaxDepth)
    throw QuadratureError("integrate_time: tolerance not reached at maximum recursion depth",
                          err);
  return adapt(h, a, mid, left, 0.5 * tol, depth + 1) +
         adapt(h, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_time(const std::function<double(double)>& h, double t0, double t1,
                      double tol) {
  if (!(t0 <= t1)) throw DomainError("integrate_time: requires t0 <= t1");
  if (t0 == t1) return 0.0;
  if (!(tol > 0.0)) throw DomainError("integrate_time: tolerance must be positive");
  const double whole = gl5(h, t0, t1);
  const double result = adapt(h, t0, t1, whole, tol, 0);
  if (!std::isfinite(result))
    throw QuadratureError("integrate_time: integrand produced a non-finite value",
                          std::numeric_limits<double>::infinity());
  return result;
}

}  // namespace varmech
