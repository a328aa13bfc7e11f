#pragma once

#include <string>

#include "varmech/lagrangian.hpp"

namespace varmech {

// Trajectory CSV formats. Full-precision decimal (17 significant digits), so
// a write/read round trip reproduces every double bit-exactly.
//
//   motion file: t,q0..q{n-1},v0..v{n-1}
//   phase file:  t,q0..q{n-1},v0..v{n-1},p0..p{n-1},f0..f{n-1}
//
// One row per grid node, uniform time spacing.

std::string motion_csv_header(int dim);
std::string phase_csv_header(int dim);

void write_motion_csv(const std::string& path, const Motion& m);

/// Writes the grid nodes of a solver-produced phase trajectory.
void write_phase_csv(const std::string& path, const PhaseTrajectory& traj);

/// Reads a motion file; velocities from the v columns.
/// Throws IoError with the row count when the file has too few rows.
Motion read_motion_csv(const std::string& path);

struct PhaseCsv {
  PhaseTrajectory traj;
  int dim = 0;
  int rows = 0;
};

/// Reads a phase file. The momentum and force curves are grid curves whose
/// derivative channels come from finite differences of the columns, not from
/// anything the writer knew, so a read-back trajectory is checked on its own
/// merits.
PhaseCsv read_phase_csv(const std::string& path);

}  // namespace varmech
