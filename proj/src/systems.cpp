#include "varmech/systems.hpp"

#include <cmath>

#include <json.hpp>

#include "varmech/error.hpp"

namespace varmech {

namespace {

// Quadratic form <g(a), b> written out on raw scalars so that the same code
// evaluates for double and dual arguments.
template <class T>
T quad_form(const SquareMatrix& g, const std::vector<T>& a, const std::vector<T>& b) {
  const int n = g.dim();
  T acc(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc = acc + g.at(i, j) * a[i] * b[j];
  return acc;
}

}  // namespace

HarmonicParams::HarmonicParams(double mass, double stiffness, Metric metric, Point center)
    : m(mass), k(stiffness), g(std::move(metric)), q0(std::move(center)) {
  if (!(m > 0.0)) throw ConfigError("harmonic system: mass must be positive");
  if (!(k > 0.0)) throw ConfigError("harmonic system: stiffness must be positive");
  if (q0.dim() != g.dim()) throw DimensionError("harmonic system: q0/metric dimensions");
}

HarmonicParams HarmonicParams::standard(int dim, double mass, double stiffness) {
  return HarmonicParams(mass, stiffness, Metric::identity(dim), Point::zero(dim));
}

double HarmonicParams::omega() const { return std::sqrt(k / m); }

StaticSystem make_static_oscillator(const HarmonicParams& p) {
  const SquareMatrix g = p.g.matrix();
  const std::vector<double> c0(p.q0.coords().begin(), p.q0.coords().end());
  const double k = p.k;
  auto u = [g, c0, k](auto q, auto, double) {
    using T = std::decay_t<decltype(q[0])>;
    std::vector<T> d(q.begin(), q.end());
    for (size_t i = 0; i < d.size(); ++i) d[i] = d[i] - c0[i];
    return 0.5 * k * quad_form(g, d, d);
  };
  ScalarField field =
      ScalarField::from_callable(p.dim(), u, /*autonomous=*/true,
                                 /*velocity_dependent=*/false)
          .with_analytic_partials(
              [p](const Point& q, const Vector&, double) {
                return p.g.apply(difference(q, p.q0)) * p.k;
              },
              [n = p.dim()](const Point&, const Vector&, double) {
                return Covector::zero(n);
              });
  return StaticSystem(std::move(field), AffineSpace(p.dim()));
}

LagrangianSystem make_lagrangian_oscillator(const HarmonicParams& p) {
  const SquareMatrix g = p.g.matrix();
  const std::vector<double> c0(p.q0.coords().begin(), p.q0.coords().end());
  const double m = p.m;
  const double k = p.k;
  auto lag = [g, c0, m, k](auto q, auto v, double) {
    using T = std::decay_t<decltype(q[0])>;
    std::vector<T> d(q.begin(), q.end());
    for (size_t i = 0; i < d.size(); ++i) d[i] = d[i] - c0[i];
    std::vector<T> vv(v.begin(), v.end());
    return 0.5 * m * quad_form(g, vv, vv) - 0.5 * k * quad_form(g, d, d);
  };
  ScalarField field =
      ScalarField::from_callable(p.dim(), lag, /*autonomous=*/true,
                                 /*velocity_dependent=*/true)
          .with_analytic_partials(
              [p](const Point& q, const Vector&, double) {
                return p.g.apply(difference(q, p.q0)) * (-p.k);
              },
              [p](const Point&, const Vector& v, double) {
                return p.g.apply(v) * p.m;
              });
  return LagrangianSystem(std::move(field), AffineSpace(p.dim()));
}

std::pair<Point, Covector> closed_form(const HarmonicParams& p, const Point& q_a,
                                       const Covector& p_a, double t) {
  const double w = p.omega();
  const Vector u0 = difference(q_a, p.q0);
  const Vector v0 = p.g.inverse_apply(p_a) * (1.0 / p.m);
  const Vector u = u0 * std::cos(w * t) + v0 * (std::sin(w * t) / w);
  const Vector udot = u0 * (-w * std::sin(w * t)) + v0 * std::cos(w * t);
  return {displace(p.q0, u), p.g.apply(udot) * p.m};
}

PhaseTrajectory closed_form_trajectory(const HarmonicParams& p, const Point& q_a,
                                       const Covector& p_a, TimeInterval iv) {
  const double w = p.omega();
  const Vector u0 = difference(q_a, p.q0);
  const Vector v0 = p.g.inverse_apply(p_a) * (1.0 / p.m);
  const int n = p.dim();

  auto u_at = [=](double t) { return u0 * std::cos(w * t) + v0 * (std::sin(w * t) / w); };
  auto udot_at = [=](double t) {
    return u0 * (-w * std::sin(w * t)) + v0 * std::cos(w * t);
  };
  auto uddot_at = [=](double t) { return u_at(t) * (-w * w); };

  Motion xi = Motion::closed_form(
      iv, n, [=](double t) { return displace(p.q0, u_at(t)); }, udot_at);
  CovectorCurve pi = CovectorCurve::closed_form(
      iv, n, [=](double t) { return p.g.apply(udot_at(t)) * p.m; },
      [=](double t) { return p.g.apply(uddot_at(t)) * p.m; });
  return PhaseTrajectory{std::move(xi), CovectorCurve::zero(iv, n), std::move(pi)};
}

HamiltonianSystem closed_form_hamiltonian(const HarmonicParams& p) {
  return HamiltonianSystem::user_supplied(
      p.dim(),
      [p](const Point& q, const Covector& f) {
        const Vector d = difference(q, p.q0);
        return pair(f, p.g.inverse_apply(f)) / (2.0 * p.m) +
               0.5 * p.k * pair(p.g.apply(d), d);
      },
      [p](const Point& q, const Covector&) {
        return p.g.apply(difference(q, p.q0)) * p.k;
      },
      [p](const Point&, const Covector& f) {
        return p.g.inverse_apply(f) * (1.0 / p.m);
      });
}

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field)) config_fail(field, "missing");
  if (!j.at(field).is_number()) config_fail(field, "must be a number");
  return j.at(field).get<double>();
}

std::vector<double> number_array(const json& j, const std::string& field, size_t size) {
  const json& a = j.at(field);
  if (!a.is_array()) config_fail(field, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) config_fail(field, "must contain only numbers");
    out.push_back(x.get<double>());
  }
  if (out.size() != size)
    config_fail(field, "expected " + std::to_string(size) + " entries, got " +
                           std::to_string(out.size()));
  return out;
}

}  // namespace

SystemConfig parse_system_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  SystemConfig cfg;
  if (!j.contains("kind")) config_fail("kind", "missing");
  if (!j.at("kind").is_string()) config_fail("kind", "must be a string");
  cfg.kind = j.at("kind").get<std::string>();
  if (cfg.kind != "harmonic" && cfg.kind != "expression")
    config_fail("kind", "must be \"harmonic\" or \"expression\"");

  if (!j.contains("dim")) config_fail("dim", "missing");
  if (!j.at("dim").is_number_integer() || j.at("dim").get<int>() < 1)
    config_fail("dim", "must be an integer >= 1");
  cfg.dim = j.at("dim").get<int>();

  if (cfg.kind == "harmonic") {
    cfg.m = require_number(j, "m");
    cfg.k = require_number(j, "k");
    if (j.contains("metric"))
      cfg.metric = number_array(j, "metric", static_cast<size_t>(cfg.dim) * cfg.dim);
    if (j.contains("q0")) cfg.q0 = number_array(j, "q0", static_cast<size_t>(cfg.dim));
  } else {
    const bool has_l = j.contains("lagrangian");
    const bool has_e = j.contains("energy");
    if (has_l == has_e)
      throw ConfigError(
          "expression config requires exactly one of 'lagrangian' or 'energy'");
    const std::string field = has_l ? "lagrangian" : "energy";
    if (!j.at(field).is_string()) config_fail(field, "must be a string");
    if (has_l)
      cfg.lagrangian = j.at(field).get<std::string>();
    else
      cfg.energy = j.at(field).get<std::string>();
    if (j.contains("params")) {
      if (!j.at("params").is_object()) config_fail("params", "must be an object");
      for (const auto& [name, value] : j.at("params").items()) {
        if (!value.is_number()) config_fail("params." + name, "must be a number");
        cfg.params[name] = value.get<double>();
      }
    }
  }
  return cfg;
}

const StaticSystem& LoadedSystem::require_statics() const {
  if (!statics)
    throw ConfigError("this system has no internal-energy (statics) face");
  return *statics;
}

const LagrangianSystem& LoadedSystem::require_lagrangian() const {
  if (!lagrangian) throw ConfigError("this system has no Lagrangian face");
  return *lagrangian;
}

LoadedSystem make_system_from_config(const SystemConfig& cfg) {
  LoadedSystem out;
  out.dim = cfg.dim;

  if (cfg.kind == "harmonic") {
    Metric g = [&] {
      try {
        return cfg.metric ? Metric(cfg.dim, *cfg.metric) : Metric::identity(cfg.dim);
      } catch (const SingularMatrixError&) {
        throw ConfigError("config field 'metric': not symmetric positive-definite");
      }
    }();
    Point q0 = cfg.q0 ? Point(*cfg.q0) : Point::zero(cfg.dim);
    HarmonicParams p(*cfg.m, *cfg.k, std::move(g), std::move(q0));
    out.harmonic = p;
    out.statics = make_static_oscillator(p);
    out.lagrangian = make_lagrangian_oscillator(p);
    return out;
  }

  const std::string& text = cfg.lagrangian ? *cfg.lagrangian : *cfg.energy;
  const Expression expr = parse_expression(text, cfg.dim);
  for (const std::string& name : expr.parameter_names())
    if (!cfg.params.count(name))
      throw ConfigError("expression references parameter '" + name +
                        "' absent from 'params'");
  ScalarField field = ScalarField::from_expression(expr, cfg.params);
  if (cfg.lagrangian) {
    if (expr.uses_time())
      throw ConfigError("a Lagrangian expression must not reference t");
    out.lagrangian = LagrangianSystem(std::move(field), AffineSpace(cfg.dim));
  } else {
    if (expr.uses_time() || expr.uses_velocity())
      throw ConfigError("an energy expression may reference only q[i]");
    out.statics = StaticSystem(std::move(field), AffineSpace(cfg.dim));
  }
  return out;
}

LoadedSystem load_system(const std::string& json_text) {
  return make_system_from_config(parse_system_config(json_text));
}

}  // namespace varmech
