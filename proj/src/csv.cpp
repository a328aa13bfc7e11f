#include "varmech/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "varmech/error.hpp"

namespace varmech {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string header_for(int dim, bool phase) {
  std::string h = "t";
  auto block = [&](const char* stem) {
    for (int i = 0; i < dim; ++i) h += "," + std::string(stem) + std::to_string(i);
  };
  block("q");
  block("v");
  if (phase) {
    block("p");
    block("f");
  }
  return h;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

double parse_cell(const std::string& s, int row) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v))
    throw IoError("trajectory CSV: bad numeric cell '" + s + "' at data row " +
                  std::to_string(row));
  return v;
}

struct Table {
  int dim = 0;
  bool phase = false;
  std::vector<double> times;
  std::vector<std::vector<double>> cols;  // per data row, all numeric cells after t
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("trajectory CSV: empty file (0 rows)");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Table t;
  const auto cells = split(line, ',');
  // Header shape decides dim and flavour: 1+2n or 1+4n columns.
  const int numeric = static_cast<int>(cells.size()) - 1;
  if (cells.empty() || cells[0] != "t" || numeric < 2)
    throw IoError("trajectory CSV: header must start with 't' and carry q/v columns");
  if (numeric % 4 == 0 && cells.back().rfind('f', 0) == 0) {
    t.phase = true;
    t.dim = numeric / 4;
  } else if (numeric % 2 == 0) {
    t.phase = false;
    t.dim = numeric / 2;
  } else {
    throw IoError("trajectory CSV: column count does not match any known layout");
  }
  const std::string expected = header_for(t.dim, t.phase);
  if (line != expected)
    throw IoError("trajectory CSV: header mismatch, expected '" + expected + "'");

  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto parts = split(line, ',');
    if (static_cast<int>(parts.size()) != numeric + 1)
      throw IoError("trajectory CSV: wrong cell count at data row " + std::to_string(row));
    t.times.push_back(parse_cell(parts[0], row));
    std::vector<double> vals;
    vals.reserve(numeric);
    for (int i = 1; i <= numeric; ++i) vals.push_back(parse_cell(parts[i], row));
    t.cols.push_back(std::move(vals));
  }
  if (static_cast<int>(t.times.size()) < 9)
    throw IoError("trajectory CSV: needs at least 9 data rows, got " +
                  std::to_string(t.times.size()));

  // Uniform spacing check.
  const double t0 = t.times.front();
  const double t1 = t.times.back();
  const int n = static_cast<int>(t.times.size());
  const double h = (t1 - t0) / (n - 1);
  if (!(h > 0.0)) throw IoError("trajectory CSV: times must be strictly increasing");
  for (int i = 0; i < n; ++i)
    if (std::abs(t.times[i] - (t0 + i * h)) > 1e-9 * std::max(1.0, std::abs(t1 - t0)))
      throw IoError("trajectory CSV: non-uniform time grid at data row " +
                    std::to_string(i + 1));
  return t;
}

}  // namespace

std::string motion_csv_header(int dim) { return header_for(dim, false); }
std::string phase_csv_header(int dim) { return header_for(dim, true); }

void write_motion_csv(const std::string& path, const Motion& m) {
  const auto& core = *m.core();
  const int nodes = core.node_count();
  const int dim = core.dim();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trajectory file '" + path + "'");
  out << header_for(dim, false) << "\n";
  for (int i = 0; i < nodes; ++i) {
    out << fmt(core.node_time(i));
    for (double x : core.node_value(i)) out << ',' << fmt(x);
    for (double x : core.node_deriv(i)) out << ',' << fmt(x);
    out << "\n";
  }
}

void write_phase_csv(const std::string& path, const PhaseTrajectory& traj) {
  const auto& xi = *traj.xi.core();
  const auto& pi = *traj.pi.core();
  const int nodes = xi.node_count();
  const int dim = xi.dim();
  if (pi.node_count() != nodes)
    throw IoError("write_phase_csv: momentum grid does not match motion grid");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trajectory file '" + path + "'");
  out << header_for(dim, true) << "\n";
  for (int i = 0; i < nodes; ++i) {
    const double t = xi.node_time(i);
    out << fmt(t);
    for (double x : xi.node_value(i)) out << ',' << fmt(x);
    for (double x : xi.node_deriv(i)) out << ',' << fmt(x);
    for (double x : pi.node_value(i)) out << ',' << fmt(x);
    const Covector f = traj.phi.at(t);
    for (int k = 0; k < dim; ++k) out << ',' << fmt(f[k]);
    out << "\n";
  }
}

Motion read_motion_csv(const std::string& path) {
  const Table t = read_table(path);
  if (t.phase) throw IoError("expected a motion CSV, found phase columns");
  const int n = t.dim;
  std::vector<Point> qs;
  std::vector<Vector> vs;
  for (const auto& row : t.cols) {
    qs.push_back(Point(std::vector<double>(row.begin(), row.begin() + n)));
    vs.push_back(Vector(std::vector<double>(row.begin() + n, row.begin() + 2 * n)));
  }
  return Motion::from_grid(TimeInterval{t.times.front(), t.times.back()}, qs, &vs);
}

PhaseCsv read_phase_csv(const std::string& path) {
  const Table t = read_table(path);
  if (!t.phase) throw IoError("expected a phase CSV (q, v, p, f columns)");
  const int n = t.dim;
  std::vector<Point> qs;
  std::vector<Vector> vs;
  std::vector<Covector> ps;
  std::vector<Covector> fs;
  for (const auto& row : t.cols) {
    auto it = row.begin();
    qs.push_back(Point(std::vector<double>(it, it + n)));
    vs.push_back(Vector(std::vector<double>(it + n, it + 2 * n)));
    ps.push_back(Covector(std::vector<double>(it + 2 * n, it + 3 * n)));
    fs.push_back(Covector(std::vector<double>(it + 3 * n, it + 4 * n)));
  }
  const TimeInterval iv{t.times.front(), t.times.back()};
  return PhaseCsv{PhaseTrajectory{Motion::from_grid(iv, qs, &vs),
                                  CovectorCurve::from_grid(iv, fs),
                                  CovectorCurve::from_grid(iv, ps)},
                  n, static_cast<int>(t.times.size())};
}

}  // namespace varmech
