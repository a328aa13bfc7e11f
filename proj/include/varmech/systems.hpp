#pragma once

#include <optional>
#include <string>

#include "varmech/hamiltonian.hpp"
#include "varmech/statics.hpp"

namespace varmech {

/// Parameters of the harmonic reference system: a material point of mass m
/// tied by a spring of stiffness k to the centre q0, in the metric g.
struct HarmonicParams {
  HarmonicParams(double mass, double stiffness, Metric metric, Point center);
  static HarmonicParams standard(int dim, double mass = 1.0, double stiffness = 1.0);

  double m;
  double k;
  Metric g;
  Point q0;

  double omega() const;  // sqrt(k/m)
  int dim() const { return g.dim(); }
};

/// U(q) = (k/2) <g(q - q0), q - q0>, with analytic gradient k g(q - q0).
StaticSystem make_static_oscillator(const HarmonicParams& p);

/// L(q, qdot) = (m/2) <g(qdot), qdot> - (k/2) <g(q - q0), q - q0>,
/// with analytic partials -k g(q - q0) and m g(qdot).
LagrangianSystem make_lagrangian_oscillator(const HarmonicParams& p);

/// The closed-form unforced evolution from initial data (q_a, p_a):
/// with w = omega, u(t) = (q_a - q0) cos(wt) + (v_a / w) sin(wt) and
/// v_a = g^{-1}(p_a)/m, returns (q0 + u(t), m g(udot(t))).
std::pair<Point, Covector> closed_form(const HarmonicParams& p, const Point& q_a,
                                       const Covector& p_a, double t);

/// The same solution wrapped as an unforced phase trajectory on an interval,
/// with exact derivative channels on both curves.
PhaseTrajectory closed_form_trajectory(const HarmonicParams& p, const Point& q_a,
                                       const Covector& p_a, TimeInterval iv);

/// Closed-form Hamiltonian of the harmonic system,
/// H(q,p) = <p, g^{-1} p>/(2m) + (k/2) <g(q - q0), q - q0>.
HamiltonianSystem closed_form_hamiltonian(const HarmonicParams& p);

/// Parsed system configuration (the structured-text schema used by the CLI).
/// Field names: kind ("harmonic" | "expression"), dim, m, k, metric
/// (n*n row-major, optional), q0 (n entries, optional), lagrangian | energy
/// (expression text), params (name -> value map, optional).
struct SystemConfig {
  std::string kind;
  int dim = 0;
  std::optional<double> m;
  std::optional<double> k;
  std::optional<std::vector<double>> metric;
  std::optional<std::vector<double>> q0;
  std::optional<std::string> lagrangian;
  std::optional<std::string> energy;
  ParamMap params;
};

SystemConfig parse_system_config(const std::string& json_text);

/// A built system: harmonic configs yield both faces, expression configs
/// yield whichever field ("energy" or "lagrangian") was given.
struct LoadedSystem {
  int dim = 0;
  std::optional<HarmonicParams> harmonic;
  std::optional<StaticSystem> statics;
  std::optional<LagrangianSystem> lagrangian;

  const StaticSystem& require_statics() const;
  const LagrangianSystem& require_lagrangian() const;
};

LoadedSystem make_system_from_config(const SystemConfig& cfg);
LoadedSystem load_system(const std::string& json_text);

}  // namespace varmech
