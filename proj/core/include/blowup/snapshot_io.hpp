#pragma once

#include <iosfwd>
#include <string>

#include "blowup/fluid_state.hpp"

namespace blowup {

/// A FluidState together with the adiabatic exponent it was written with.
struct Snapshot {
  FluidState state;
  double gamma = 1.4;
};

// Binary snapshot container. Text header, one `key value...` pair per line:
//
//   BLOWUP-SNAPSHOT 1
//   dimension 2
//   cells 128 128
//   extents 6 6            (half-widths; axis a spans [-R_a, R_a])
//   gamma 1.4
//   time 0
//   encoding float64-le
//   arrays rho v1 v2 p
//   end_header
//
// followed by the arrays in the listed order, each grid.size() little-endian
// IEEE-754 doubles in row-major (axis 0 slowest) order.
void write_snapshot(std::ostream& out, const Snapshot& snap);
Snapshot read_snapshot(std::istream& in);
void write_snapshot_file(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot_file(const std::string& path);

// CSV with header x1..xn,rho,v1..vn,p and one row per cell. On import the
// grid is reconstructed from the distinct cell-centre coordinates; rows may
// come in any order.
void write_state_csv(std::ostream& out, const FluidState& state);
FluidState read_state_csv(std::istream& in);
void write_state_csv_file(const std::string& path, const FluidState& state);
FluidState read_state_csv_file(const std::string& path);

}  // namespace blowup
