#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "blowup/criteria.hpp"

namespace blowup::criteria {

// Text report, one block per criterion:
//
//   [T2.1]
//   satisfied = true
//   lhs = 3.14159...
//   rhs = ...
//   margin = ...
//   t_star = 0.5          (or "none")
//   input.E = ...
//   notes = ...
void write_report(std::ostream& out, const CriterionReport& r);
void write_diagnostics(std::ostream& out, const DiagnosticsReport& d);
void write_rotation_bounds(std::ostream& out, const RotationBounds& b);

/// CSV columns: [extra...,]tag,satisfied,lhs,rhs,margin,t_star,inputs,notes.
/// t_star is empty when absent; inputs are "name=value;..." and, like notes, quoted.
std::string criteria_csv_header(const std::vector<std::string>& extra = {});
std::string criteria_csv_row(const CriterionReport& r, const std::vector<double>& extra = {});

}  // namespace blowup::criteria
