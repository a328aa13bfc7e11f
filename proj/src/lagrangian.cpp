#include "varmech/lagrangian.hpp"

#include <cmath>

#include "varmech/error.hpp"
#include "varmech/quadrature.hpp"

namespace varmech {

namespace {

constexpr int kDefaultDensePanels = 512;
constexpr int kMaxDensePanels = 8192;

int dense_panels(const Motion& m, int requested) {
  if (requested > 0) return requested;
  const auto h = m.grid_step();
  if (!h) return kDefaultDensePanels;
  const int from_grid = 4 * static_cast<int>(std::lround(m.interval().span() / *h));
  return std::min(kMaxDensePanels, std::max(kDefaultDensePanels, from_grid));
}

detail::CorePtr root_core(detail::CorePtr c) {
  while (auto parent = c->view_parent()) c = parent;
  return c;
}

// For grid-backed motions the momentum curve is built from the node data
// itself (where the velocities are authoritative), not from interpolated
// resamples: between nodes a C1 interpolant carries an O(h^2) second
// derivative error that would swamp the Euler-Lagrange residual. The curve
// spans the root grid, so restricted views differentiate through it too.
std::optional<CovectorCurve> node_momentum_curve(const LagrangianSystem& sys,
                                                 const Motion& m) {
  const detail::CorePtr root = root_core(m.core());
  if (!root->grid_step()) return std::nullopt;
  const int nodes = root->node_count();
  std::vector<Covector> values;
  values.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const auto q = root->node_value(i);
    const auto v = root->node_deriv(i);
    values.push_back(sys.dv(Point(std::vector<double>(q.begin(), q.end())),
                            Vector(std::vector<double>(v.begin(), v.end()))));
  }
  return CovectorCurve::from_grid(root->interval(), values);
}

// Times where the Euler-Lagrange residual of a motion is meaningfully
// defined: the root grid nodes clipped to the interval (plus the interval
// ends) for grid motions, a dense uniform grid for closed forms.
std::vector<double> residual_times(const Motion& m) {
  const TimeInterval iv = m.interval();
  std::vector<double> ts;
  const detail::CorePtr root = root_core(m.core());
  if (root->grid_step()) {
    ts.push_back(iv.t0);
    const int nodes = root->node_count();
    for (int i = 0; i < nodes; ++i) {
      const double t = root->node_time(i);
      if (t > ts.back() && t < iv.t1) ts.push_back(t);
    }
    ts.push_back(iv.t1);
  } else {
    const int np = kDefaultDensePanels;
    ts.reserve(np + 1);
    for (int i = 0; i <= np; ++i)
      ts.push_back(i == np ? iv.t1 : iv.t0 + iv.span() * i / np);
  }
  return ts;
}

}  // namespace

LagrangianSystem::LagrangianSystem(ScalarField lagrangian, AffineSpace space_)
    : L(std::move(lagrangian)), space(space_) {
  if (L.dim() != space.dim)
    throw DimensionError("LagrangianSystem: field dimension does not match space");
  if (!L.autonomous())
    throw ConfigError("LagrangianSystem: the Lagrangian must be autonomous");
}

double action(const LagrangianSystem& sys, const Motion& m, double quad_tol) {
  const TimeInterval iv = m.interval();
  return integrate_time([&](double t) { return sys.value(m.at(t), m.velocity(t)); },
                        iv.t0, iv.t1, quad_tol);
}

double action_derivative_direct(const LagrangianSystem& sys, const Motion& m,
                                const Displacement& d, double quad_tol) {
  if (!same_interval(m.interval(), d.interval()))
    throw DomainError("action_derivative_direct: interval mismatch");
  const TimeInterval iv = m.interval();
  return integrate_time(
      [&](double t) {
        const Point q = m.at(t);
        const Vector v = m.velocity(t);
        return pair(sys.dq(q, v), d.at(t)) + pair(sys.dv(q, v), d.derivative(t));
      },
      iv.t0, iv.t1, quad_tol);
}

CovectorCurve sampled_momentum_curve(const LagrangianSystem& sys, const Motion& m,
                                     int panels) {
  const TimeInterval iv = m.interval();
  const int np = dense_panels(m, panels);
  const double h = iv.span() / np;
  std::vector<Covector> values;
  values.reserve(np + 1);
  for (int i = 0; i <= np; ++i) {
    const double t = (i == np) ? iv.t1 : iv.t0 + i * h;
    values.push_back(sys.dv(m.at(t), m.velocity(t)));
  }
  return CovectorCurve::from_grid(iv, values);
}

double action_derivative_by_parts(const LagrangianSystem& sys, const Motion& m,
                                  const Displacement& d, double quad_tol) {
  if (!same_interval(m.interval(), d.interval()))
    throw DomainError("action_derivative_by_parts: interval mismatch");
  const TimeInterval iv = m.interval();
  const CovectorCurve lambda = sampled_momentum_curve(sys, m);
  const double integral = integrate_time(
      [&](double t) {
        const Point q = m.at(t);
        const Vector v = m.velocity(t);
        return pair(sys.dq(q, v) - lambda.derivative(t), d.at(t));
      },
      iv.t0, iv.t1, quad_tol);
  return integral + pair(momentum(sys, m, iv.t1), d.at(iv.t1)) -
         pair(momentum(sys, m, iv.t0), d.at(iv.t0));
}

Covector el_residual(const LagrangianSystem& sys, const Motion& m,
                     const CovectorCurve& phi, double t) {
  const std::optional<CovectorCurve> node_curve = node_momentum_curve(sys, m);
  const CovectorCurve lambda = node_curve ? *node_curve : sampled_momentum_curve(sys, m);
  return lambda.derivative(t) - sys.dq(m.at(t), m.velocity(t)) - phi.at(t);
}

Covector momentum(const LagrangianSystem& sys, const Motion& m, double t) {
  return sys.dv(m.at(t), m.velocity(t));
}

DynamicsReport dynamics_membership(const LagrangianSystem& sys, const Motion& m,
                                   const CovectorTriple& c, double tol) {
  if (!same_interval(m.interval(), c.phi.interval()))
    throw DomainError("dynamics_membership: force curve interval differs from motion");
  const TimeInterval iv = m.interval();
  const std::optional<CovectorCurve> node_curve = node_momentum_curve(sys, m);
  const CovectorCurve lambda = node_curve ? *node_curve : sampled_momentum_curve(sys, m);

  DynamicsReport rep;
  for (const double t : residual_times(m)) {
    const Covector res =
        lambda.derivative(t) - sys.dq(m.at(t), m.velocity(t)) - c.phi.at(t);
    rep.el_max = std::max(rep.el_max, res.inf_norm());
  }
  rep.p0_residual = (momentum(sys, m, iv.t0) - c.p0).inf_norm();
  rep.p1_residual = (momentum(sys, m, iv.t1) - c.p1).inf_norm();
  rep.member = rep.el_max <= tol && rep.p0_residual <= tol && rep.p1_residual <= tol;
  return rep;
}

VariationalReport variational_membership(const LagrangianSystem& sys, const Motion& m,
                                         const CovectorTriple& c, int trials,
                                         std::uint64_t seed, double tol) {
  const TimeInterval iv = m.interval();
  const double quad_tol = std::min(1e-10, tol * 1e-2);
  detail::Rng rng(seed);
  VariationalReport rep;
  rep.member = true;
  for (int trial = 0; trial < trials; ++trial) {
    const Displacement d =
        detail::random_polynomial_displacement(rng, iv, sys.space.dim);
    const double lhs = triple_pairing(c, d, quad_tol);
    const double rhs = action_derivative_direct(sys, m, d, quad_tol);
    const double mismatch = std::abs(lhs - rhs);
    if (mismatch > rep.max_mismatch) rep.max_mismatch = mismatch;
    if (mismatch > tol && rep.witness_trial < 0) {
      rep.witness_trial = trial;
      rep.member = false;
    }
  }
  return rep;
}

std::pair<Covector, Covector> lagrange_residuals(const LagrangianSystem& sys,
                                                 const PhaseTrajectory& traj, double t) {
  const Point q = traj.xi.at(t);
  const Vector v = traj.xi.velocity(t);
  const Covector first = sys.dq(q, v) - (traj.pi.derivative(t) - traj.phi.at(t));
  const Covector second = sys.dv(q, v) - traj.pi.at(t);
  return {first, second};
}

double energy_along(const LagrangianSystem& sys, const PhaseTrajectory& traj, double t) {
  const Point q = traj.xi.at(t);
  const Vector v = traj.xi.velocity(t);
  return pair(traj.pi.at(t), v) - sys.value(q, v);
}

namespace detail {

std::uint64_t Rng::next_u64() {
  // splitmix64; fixed algorithm so seeded streams are platform-independent.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Displacement random_polynomial_displacement(Rng& rng, TimeInterval iv, int dim,
                                            int max_degree) {
  std::vector<Vector> coeffs;
  coeffs.reserve(max_degree + 1);
  for (int k = 0; k <= max_degree; ++k) {
    std::vector<double> c(dim);
    for (int i = 0; i < dim; ++i) c[i] = rng.uniform(-1.0, 1.0);
    coeffs.push_back(Vector(std::move(c)));
  }
  return Displacement::polynomial(iv, std::move(coeffs));
}

}  // namespace detail

}  // namespace varmech
