#pragma once

#include <optional>
#include <vector>

#include "blowup/gas_model.hpp"
#include "blowup/moments.hpp"

namespace blowup {

/// Residuals of the balance laws satisfied by the moment functionals, measured
/// on a uniformly spaced MomentSet series with central differences.
///
/// Each residual is the max over interior snapshots of |lhs - rhs| divided by
/// a scale (max magnitude of the terms involved, floored at `scale_floor`).
struct IdentityReport {
  double dt = 0.0;
  double dG_minus_F = 0.0;                     // dG/dt = F
  std::optional<double> angular_momentum;      // d M_k / dt = 0 (force-free)
  std::optional<double> energy_increase;       // max positive dE/dt, relative (force-free)
  std::optional<double> f_perp_rate;           // dF_perp/dt = -l F (Coriolis)
  std::optional<double> rotating_momentum;     // drift of lG + F_perp (Coriolis)
};

IdentityReport time_series_identities(const std::vector<MomentSet>& series, const GasModel& model,
                                      double scale_floor = 1e-300);

}  // namespace blowup
