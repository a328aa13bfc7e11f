// Command-line front end: statics solves, dynamics simulation, membership
// checks, Legendre tables and pairing probes over systems defined in a JSON
// config. All randomness flows from --seed; identical (config, flags, seed)
// produce byte-identical stdout and CSV output (wall time goes to stderr).
//
// Exit codes: 0 pass, 1 check failure, 2 solver non-convergence,
// 3 hyperregularity failure, 64 usage error, 65 input/format error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "varmech/csv.hpp"
#include "varmech/solver.hpp"
#include "varmech/systems.hpp"

namespace {

using namespace varmech;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(std::span<const double> xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

std::vector<double> parse_components(const std::string& text, int dim, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": bad component '" + cell + "'");
    }
  }
  if (static_cast<int>(out.size()) != dim)
    throw UsageError(std::string(what) + ": expected " + std::to_string(dim) +
                     " components, got " + std::to_string(out.size()));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A force curve from "zero" or ';'-separated expressions in t.
CovectorCurve parse_force(const std::string& text, int dim, TimeInterval iv) {
  if (text == "zero" || text.empty()) return CovectorCurve::zero(iv, dim);
  std::vector<Expression> comps;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ';')) {
    const Expression e = parse_expression(cell, dim);
    if (e.uses_position() || e.uses_velocity())
      throw UsageError("--force expressions may depend on t only");
    if (!e.parameter_names().empty())
      throw UsageError("--force expressions may not use named parameters");
    comps.push_back(e);
  }
  if (static_cast<int>(comps.size()) != dim)
    throw UsageError("--force: expected " + std::to_string(dim) +
                     " ';'-separated expressions, got " + std::to_string(comps.size()));
  const ParamMap no_params;
  auto value = [comps, no_params, dim](double t) {
    const std::vector<double> zq(dim, 0.0);
    std::vector<double> out(dim);
    for (int i = 0; i < dim; ++i)
      out[i] = comps[i].eval<double>(zq, zq, t, no_params);
    return Covector(std::move(out));
  };
  return CovectorCurve::closed_form(iv, dim, value, nullptr);
}

struct Echo {
  std::string line;
  std::uint64_t seed = 0;
};

void print_header(const Echo& e) {
  std::cout << "command: " << e.line << "\n";
  std::cout << "seed: " << e.seed << "\n";
}

int run_statics(const LoadedSystem& lsys, const std::string& force_str,
                const std::string& init_str, double tol, int max_iter, const Echo& echo) {
  const StaticSystem& sys = lsys.require_statics();
  const int n = sys.space.dim;
  const Covector f(force_str.empty() ? std::vector<double>(n, 0.0)
                                     : parse_components(force_str, n, "--force"));
  const Point q_init(init_str.empty() ? std::vector<double>(n, 0.0)
                                      : parse_components(init_str, n, "--init"));
  print_header(echo);
  try {
    const EquilibriumResult r = solve_equilibrium(sys, f, q_init, tol, max_iter);
    std::cout << "equilibrium: " << fmt_list(r.q.coords()) << "\n";
    std::cout << "residual.constitutive: " << fmt(r.residual) << "\n";
    std::cout << "iterations: " << r.iterations << "\n";
    std::cout << "result: PASS\n";
    return 0;
  } catch (const ConvergenceError& e) {
    std::cout << "error: " << e.what() << "\n";
    std::cout << "residual.final: " << fmt(e.final_residual) << "\n";
    std::cout << "result: FAIL\n";
    return 2;
  } catch (const SingularMatrixError& e) {
    std::cout << "error: " << e.what() << "\n";
    std::cout << "result: FAIL\n";
    return 2;
  }
}

int run_simulate(const LoadedSystem& lsys, const std::string& q0_str,
                 const std::string& p0_str, const std::string& force_str, double t0,
                 double t1, int steps, const std::string& out_path, const Echo& echo) {
  const LagrangianSystem& sys = lsys.require_lagrangian();
  const int n = sys.space.dim;
  if (steps < 8) throw UsageError("--steps must be at least 8");
  if (!(t0 < t1)) throw UsageError("--t1 must exceed --t0");
  const Point q0(parse_components(q0_str, n, "--q0"));
  const Covector p0(p0_str.empty() ? std::vector<double>(n, 0.0)
                                   : parse_components(p0_str, n, "--p0"));
  // Pad the force domain so RK4 stage times at the ends stay inside.
  const double pad = (t1 - t0) / steps;
  const CovectorCurve phi = parse_force(force_str, n, TimeInterval{t0 - pad, t1 + pad});

  const PhaseTrajectory traj = solve_forward(sys, q0, p0, phi, t0, t1, steps);
  write_phase_csv(out_path, traj);

  print_header(echo);
  std::cout << "steps: " << steps << "\n";
  std::cout << "final.q: " << fmt_list(traj.xi.at(t1).coords()) << "\n";
  std::cout << "final.p: " << fmt_list(traj.pi.at(t1).comps()) << "\n";
  std::cout << "out: " << out_path << "\n";
  std::cout << "result: PASS\n";
  return 0;
}

int run_check(const LoadedSystem& lsys, const std::string& traj_path,
              const std::string& mode, double tol, const Echo& echo) {
  const LagrangianSystem& sys = lsys.require_lagrangian();
  const PhaseCsv in = read_phase_csv(traj_path);
  if (in.dim != sys.space.dim)
    throw IoError("trajectory dimension " + std::to_string(in.dim) +
                  " does not match system dimension " + std::to_string(sys.space.dim));
  const PhaseTrajectory& traj = in.traj;
  const TimeInterval iv = traj.xi.interval();

  print_header(echo);
  std::cout << "rows: " << in.rows << "\n";
  bool pass = true;

  if (mode == "interval" || mode == "both") {
    const CovectorTriple c{traj.phi, traj.pi.at(iv.t0), traj.pi.at(iv.t1)};
    const DynamicsReport r = dynamics_membership(sys, traj.xi, c, tol);
    std::cout << "residual.euler_lagrange_max: " << fmt(r.el_max) << "\n";
    std::cout << "residual.momentum_t0: " << fmt(r.p0_residual) << "\n";
    std::cout << "residual.momentum_t1: " << fmt(r.p1_residual) << "\n";
    pass = pass && r.member;
  }
  if (mode == "dirac" || mode == "both") {
    double worst_r = 0.0, worst_p = 0.0;
    const int grid = 257;
    for (int i = 0; i < grid; ++i) {
      const double t = iv.t0 + iv.span() * i / (grid - 1);
      const PhasePoint4 x{traj.xi.at(t), traj.pi.at(t), traj.xi.velocity(t),
                          traj.pi.derivative(t) - traj.phi.at(t)};
      const InfinitesimalReport r = infinitesimal_membership(sys, x, tol);
      worst_r = std::max(worst_r, r.r_residual);
      worst_p = std::max(worst_p, r.p_residual);
    }
    std::cout << "residual.dirac_force_max: " << fmt(worst_r) << "\n";
    std::cout << "residual.dirac_momentum_max: " << fmt(worst_p) << "\n";
    pass = pass && worst_r <= tol && worst_p <= tol;
  }
  if (mode == "both") {
    const double mid = 0.5 * (iv.t0 + iv.t1);
    const std::vector<TimeInterval> subs{iv, {iv.t0, mid}, {mid, iv.t1}};
    const ConsistencyReport r = script_D_consistency(sys, traj, subs, tol);
    std::cout << "channels_agree: " << (r.channels_agree ? "true" : "false") << "\n";
    pass = pass && r.consistent() && r.channels_agree;
  }
  std::cout << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

std::string legendre_table_header(int n) {
  std::string h;
  auto block = [&](const char* stem) {
    for (int i = 0; i < n; ++i) {
      if (!h.empty()) h += ',';
      h += std::string(stem) + std::to_string(i);
    }
  };
  block("q");
  block("p");
  block("rho");
  h += ",H\n";
  return h;
}

int run_legendre(const LoadedSystem& lsys, const std::string& grid_spec,
                 const std::string& points_path, const std::string& out_path,
                 double cond_max, const Echo& echo) {
  const LagrangianSystem& sys = lsys.require_lagrangian();
  const int n = sys.space.dim;

  std::vector<std::pair<Point, Covector>> rows;
  if (!grid_spec.empty()) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
        count < 1 || !(lo <= hi))
      throw UsageError("--grid must be min:max:count");
    size_t total = 1;
    for (int d = 0; d < 2 * n; ++d) {
      total *= static_cast<size_t>(count);
      if (total > 100000) throw UsageError("--grid: too many points (limit 100000)");
    }
    std::vector<int> idx(2 * n, 0);
    const auto coord = [&](int i) {
      return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    };
    for (size_t r = 0; r < total; ++r) {
      std::vector<double> qc(n), pc(n);
      for (int d = 0; d < n; ++d) qc[d] = coord(idx[d]);
      for (int d = 0; d < n; ++d) pc[d] = coord(idx[n + d]);
      rows.emplace_back(Point(std::move(qc)), Covector(std::move(pc)));
      for (int d = 0; d < 2 * n; ++d) {
        if (++idx[d] < count) break;
        idx[d] = 0;
      }
    }
  } else if (!points_path.empty()) {
    std::ifstream in(points_path);
    if (!in) throw IoError("cannot open points file '" + points_path + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("q0", 0) == 0) continue;
      const std::vector<double> cells = parse_components(line, 2 * n, "points row");
      rows.emplace_back(Point(std::vector<double>(cells.begin(), cells.begin() + n)),
                        Covector(std::vector<double>(cells.begin() + n, cells.end())));
    }
    if (rows.empty()) throw IoError("points file has no data rows");
  } else {
    throw UsageError("legendre requires --grid or --points");
  }

  print_header(echo);
  std::ostringstream table;
  table << legendre_table_header(n);
  double worst_cond = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& [q, p] = rows[i];
    Vector rho = Vector::zero(n);
    try {
      rho = legendre_inverse(sys, q, p);
    } catch (const HyperregularityError& e) {
      std::cout << "hyperregular: false\n";
      std::cout << "witness_row: " << i << "\n";
      std::cout << "error: " << e.what() << "\n";
      std::cout << "result: FAIL\n";
      return 3;
    }
    const HyperregularityReport probe = hyperregularity_probe(sys, {{q, rho}}, cond_max);
    if (!probe.hyperregular) {
      std::cout << "hyperregular: false\n";
      std::cout << "witness_row: " << i << "\n";
      std::cout << "condition: " << fmt(probe.samples[0].condition) << "\n";
      std::cout << "result: FAIL\n";
      return 3;
    }
    worst_cond = std::max(worst_cond, probe.samples[0].condition);
    const double h = energy(sys, q, p, rho);
    table << fmt_list(q.coords()) << ',' << fmt_list(p.comps()) << ','
          << fmt_list(rho.comps()) << ',' << fmt(h) << "\n";
  }
  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write '" + out_path + "'");
    out << table.str();
    std::cout << "out: " << out_path << "\n";
  }
  std::cout << "rows: " << rows.size() << "\n";
  std::cout << "hyperregular: true\n";
  std::cout << "condition_max: " << fmt(worst_cond) << "\n";
  std::cout << "result: PASS\n";
  return 0;
}

int run_pairing(const LoadedSystem& lsys, const std::string& traj_path,
                const std::string& dist_str, int probes, double tol, const Echo& echo) {
  const LagrangianSystem& sys = lsys.require_lagrangian();
  const PhaseCsv in = read_phase_csv(traj_path);
  if (in.dim != sys.space.dim)
    throw IoError("trajectory dimension does not match system dimension");
  const PhaseTrajectory& traj = in.traj;
  const Distribution dist = Distribution::parse(dist_str);

  print_header(echo);
  std::cout << "distribution: " << dist.str() << "\n";

  if (dist.kind() == Distribution::Kind::kDirac) {
    const double t = dist.point();
    if (!traj.xi.interval().contains(t))
      throw IoError("dirac point lies outside the trajectory interval");
    const DiracReduction red = dirac_reduce(traj.phi, traj.pi, t);
    const PhasePoint4 x{traj.xi.at(t), red.p, traj.xi.velocity(t), red.r};
    const InfinitesimalReport r = infinitesimal_membership(sys, x, tol);
    std::cout << "residual.force: " << fmt(r.r_residual) << "\n";
    std::cout << "residual.momentum: " << fmt(r.p_residual) << "\n";
    std::cout << "result: " << (r.member ? "PASS" : "FAIL") << "\n";
    return r.member ? 0 : 1;
  }

  const TimeInterval sub = dist.bounds();
  if (!traj.xi.interval().contains(sub))
    throw IoError("interval lies outside the trajectory domain");
  const Motion m = traj.xi.restrict(sub.t0, sub.t1);
  detail::Rng rng(echo.seed);
  double worst = 0.0;
  const double quad_tol = std::min(1e-10, tol * 1e-2);
  for (int i = 0; i < probes; ++i) {
    const Displacement d = detail::random_polynomial_displacement(rng, sub, in.dim);
    const double lhs = unified_pairing(traj.phi, traj.pi, dist, d, quad_tol);
    const double rhs = action_derivative_direct(sys, m, d, quad_tol);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  std::cout << "probes: " << probes << "\n";
  std::cout << "residual.pairing_max: " << fmt(worst) << "\n";
  const bool pass = worst <= tol;
  std::cout << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational mechanics engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "system config (JSON)")->required();
  app.add_option("--seed", seed, "seed for all randomized probes");

  auto* cmd_statics = app.add_subcommand("statics", "solve for an equilibrium under a force");
  std::string st_force, st_init;
  double st_tol = 1e-10;
  int st_max_iter = 50;
  cmd_statics->add_option("--force", st_force, "external force components a,b,...");
  cmd_statics->add_option("--init", st_init, "initial guess components");
  cmd_statics->add_option("--tol", st_tol, "residual tolerance");
  cmd_statics->add_option("--max-iter", st_max_iter, "Newton iteration cap");

  auto* cmd_sim = app.add_subcommand("simulate", "integrate the Lagrange equations");
  std::string sm_q0, sm_p0, sm_force = "zero", sm_out;
  double sm_t0 = 0.0, sm_t1 = 0.0;
  int sm_steps = 512;
  cmd_sim->add_option("--q0", sm_q0, "initial configuration")->required();
  cmd_sim->add_option("--p0", sm_p0, "initial momentum (default 0)");
  cmd_sim->add_option("--force", sm_force, "'zero' or ';'-separated expressions in t");
  cmd_sim->add_option("--t0", sm_t0, "start time");
  cmd_sim->add_option("--t1", sm_t1, "end time")->required();
  cmd_sim->add_option("--steps", sm_steps, "RK4 step count (>= 8)");
  cmd_sim->add_option("--out", sm_out, "output phase CSV")->required();

  auto* cmd_check = app.add_subcommand("check", "residual checks on a phase trajectory");
  std::string ck_traj, ck_mode = "both";
  double ck_tol = 1e-6;
  cmd_check->add_option("--trajectory", ck_traj, "phase CSV path")->required();
  cmd_check->add_option("--mode", ck_mode, "interval | dirac | both")
      ->check(CLI::IsMember({"interval", "dirac", "both"}));
  cmd_check->add_option("--tol", ck_tol, "membership tolerance");

  auto* cmd_leg = app.add_subcommand("legendre", "tabulate (q, p, rho, H)");
  std::string lg_grid, lg_points, lg_out;
  double lg_cond = 1e8;
  cmd_leg->add_option("--grid", lg_grid, "min:max:count per coordinate");
  cmd_leg->add_option("--points", lg_points, "CSV of q,p rows");
  cmd_leg->add_option("--out", lg_out, "output CSV (default stdout)");
  cmd_leg->add_option("--cond-max", lg_cond, "condition-number ceiling");

  auto* cmd_pair = app.add_subcommand("pairing", "pairing probes against a trajectory");
  std::string pr_traj, pr_dist;
  int pr_probes = 100;
  double pr_tol = 1e-6;
  cmd_pair->add_option("--trajectory", pr_traj, "phase CSV path")->required();
  cmd_pair->add_option("--dist", pr_dist, "interval(a,b) or dirac(t)")->required();
  cmd_pair->add_option("--probes", pr_probes, "number of probe displacements");
  cmd_pair->add_option("--tol", pr_tol, "mismatch tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  Echo echo;
  echo.seed = seed;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) echo.line += ' ';
    echo.line += argv[i];
  }

  const auto wall_start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    LoadedSystem lsys = [&] {
      try {
        return load_system(read_file(config_path));
      } catch (const SingularMatrixError& e) {
        throw ConfigError(std::string("config metric: ") + e.what());
      }
    }();

    if (cmd_statics->parsed())
      code = run_statics(lsys, st_force, st_init, st_tol, st_max_iter, echo);
    else if (cmd_sim->parsed())
      code = run_simulate(lsys, sm_q0, sm_p0, sm_force, sm_t0, sm_t1, sm_steps, sm_out,
                          echo);
    else if (cmd_check->parsed())
      code = run_check(lsys, ck_traj, ck_mode, ck_tol, echo);
    else if (cmd_leg->parsed())
      code = run_legendre(lsys, lg_grid, lg_points, lg_out, lg_cond, echo);
    else if (cmd_pair->parsed())
      code = run_pairing(lsys, pr_traj, pr_dist, pr_probes, pr_tol, echo);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    code = 64;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << " (final residual "
              << fmt(e.final_residual) << ")\n";
    code = 2;
  } catch (const HyperregularityError& e) {
    std::cerr << "hyperregularity failure: " << e.what() << "\n";
    code = 3;
  } catch (const ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    code = 65;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    code = 65;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    code = 65;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    code = 65;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }

  const auto wall_end = std::chrono::steady_clock::now();
  std::cerr << "wall_time_s: "
            << std::chrono::duration<double>(wall_end - wall_start).count() << "\n";
  return code;
}
