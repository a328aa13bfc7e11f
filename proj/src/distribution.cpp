#include "varmech/distribution.hpp"

#include <charconv>
#include <cmath>

#include "varmech/error.hpp"
#include "varmech/quadrature.hpp"

namespace varmech {

Distribution Distribution::interval(double t0, double t1) {
  if (!(t0 < t1)) throw DomainError("Distribution::interval requires t0 < t1");
  Distribution d;
  d.kind_ = Kind::kInterval;
  d.iv_ = TimeInterval{t0, t1};
  return d;
}

Distribution Distribution::dirac(double t) {
  if (!std::isfinite(t)) throw DomainError("Distribution::dirac requires a finite point");
  Distribution d;
  d.kind_ = Kind::kDirac;
  d.t_ = t;
  return d;
}

namespace {

double parse_number(std::string_view s, const char* what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ')) ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  while (p < e && *p == ' ') ++p;
  if (ec != std::errc() || p != e)
    throw DomainError(std::string("distribution literal: bad number in ") + what);
  return v;
}

}  // namespace

Distribution Distribution::parse(std::string_view text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw DomainError("distribution literal must be interval(t0,t1) or dirac(t)");
  const std::string_view head = text.substr(0, open);
  const std::string_view args = text.substr(open + 1, close - open - 1);
  if (head == "dirac") return dirac(parse_number(args, "dirac"));
  if (head == "interval") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos)
      throw DomainError("interval literal requires two arguments");
    return interval(parse_number(args.substr(0, comma), "interval"),
                    parse_number(args.substr(comma + 1), "interval"));
  }
  throw DomainError("unknown distribution kind '" + std::string(head) + "'");
}

const TimeInterval& Distribution::bounds() const {
  if (kind_ != Kind::kInterval) throw DomainError("bounds() on a Dirac distribution");
  return iv_;
}

double Distribution::point() const {
  if (kind_ != Kind::kDirac) throw DomainError("point() on an interval distribution");
  return t_;
}

TimeInterval Distribution::support_hull() const {
  if (kind_ == Kind::kInterval) return iv_;
  return TimeInterval{t_, t_};
}

std::string Distribution::str() const {
  char buf[80];
  if (kind_ == Kind::kInterval)
    std::snprintf(buf, sizeof buf, "interval(%.17g,%.17g)", iv_.t0, iv_.t1);
  else
    std::snprintf(buf, sizeof buf, "dirac(%.17g)", t_);
  return buf;
}

double integrate(const Distribution& c, const std::function<double(double)>& h,
                 double tol) {
  if (c.kind() == Distribution::Kind::kDirac) return h(c.point());
  const TimeInterval& iv = c.bounds();
  return integrate_time(h, iv.t0, iv.t1, tol);
}

namespace {

void check_support(const Distribution& c, const TimeInterval& domain, const char* what) {
  const TimeInterval hull = c.support_hull();
  if (!domain.contains(hull.t0) || !domain.contains(hull.t1))
    throw DomainError(std::string(what) + ": distribution support not covered by curve domain");
}

}  // namespace

double unified_pairing(const CovectorCurve& phi, const CovectorCurve& pi,
                       const Distribution& c, const Displacement& d, double tol) {
  if (phi.dim() != d.dim() || pi.dim() != d.dim())
    throw DimensionError("unified_pairing: dimension mismatch");
  check_support(c, phi.interval(), "unified_pairing(phi)");
  check_support(c, pi.interval(), "unified_pairing(pi)");
  check_support(c, d.interval(), "unified_pairing(displacement)");
  auto integrand = [&](double t) {
    return pair(pi.derivative(t) - phi.at(t), d.at(t)) + pair(pi.at(t), d.derivative(t));
  };
  return integrate(c, integrand, tol);
}

EquivalenceReport covector_equivalent(const CovectorCurve& phi, const CovectorCurve& pi,
                                      const CovectorCurve& phi2, const CovectorCurve& pi2,
                                      const Distribution& c, int trials,
                                      std::uint64_t seed, double tol) {
  const int dim = phi.dim();
  // Probe displacements live on the support hull (or a unit neighbourhood of
  // a Dirac point, where only the value and slope at the point matter).
  TimeInterval iv = c.support_hull();
  if (c.kind() == Distribution::Kind::kDirac)
    iv = TimeInterval{c.point() - 1.0, c.point() + 1.0};
  const double quad_tol = std::min(1e-10, tol * 1e-2);

  detail::Rng rng(seed);
  EquivalenceReport rep;
  for (int trial = 0; trial < trials; ++trial) {
    const Displacement d = detail::random_polynomial_displacement(rng, iv, dim);
    const double a = unified_pairing(phi, pi, c, d, quad_tol);
    const double b = unified_pairing(phi2, pi2, c, d, quad_tol);
    const double diff = std::abs(a - b);
    if (diff > rep.max_difference) rep.max_difference = diff;
    if (diff > tol && rep.equivalent) {
      rep.equivalent = false;
      rep.witness = d;
    }
  }
  return rep;
}

InfinitesimalReport infinitesimal_membership(const LagrangianSystem& sys,
                                             const PhasePoint4& x, double tol) {
  InfinitesimalReport rep;
  rep.r_residual = (sys.dq(x.q, x.qdot) - x.r).inf_norm();
  rep.p_residual = (sys.dv(x.q, x.qdot) - x.p).inf_norm();
  rep.member = rep.r_residual <= tol && rep.p_residual <= tol;
  return rep;
}

DiracReduction dirac_reduce(const CovectorCurve& phi, const CovectorCurve& pi, double t) {
  return {pi.derivative(t) - phi.at(t), pi.at(t)};
}

}  // namespace varmech
