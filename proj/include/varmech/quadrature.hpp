#pragma once

#include <functional>

namespace varmech {

inline constexpr double kDefaultQuadTol = 1e-10;

/// Integral of h over [t0, t1] by adaptive composite Gauss-Legendre
/// quadrature (5-point panels, recursive bisection), to absolute tolerance
/// tol. A 5-point panel integrates polynomials of degree <= 9 exactly.
///
/// Throws DomainError if t1 < t0 and QuadratureError if the tolerance is not
/// reached at the maximum recursion depth or the integrand is non-finite.
double integrate_time(const std::function<double(double)>& h, double t0, double t1,
                      double tol = kDefaultQuadTol);

}  // namespace varmech
