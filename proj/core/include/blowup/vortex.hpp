#pragma once

#include "blowup/fluid_state.hpp"

namespace blowup {

/// Stationary compactly supported vortex of the rotating 2D Euler system,
/// V = f(theta) x_perp, rho = g(theta)^{1/(gamma-1)}, P = A rho^gamma with
/// theta = |x|^2 / 2 and
///   f(theta) = (l/nu)(nu - theta),
///   g(theta) = C_offset + (l^2 / (6 K nu^2)) (nu^3 + theta^2 (2 theta - 3 nu)),
/// both on [0, nu]; beyond nu, f = 0 and g = C_offset. K = A gamma/(gamma-1).
/// A positive C_offset puts the vortex on a uniform background without
/// changing the balance.
struct VortexParams {
  double l = 1.0;
  double nu = 1.0;
  double A_state = 1.0 / 12.0;
  double gamma = 2.0;
  double C_offset = 0.0;

  double K() const { return A_state * gamma / (gamma - 1.0); }
  void validate() const;
};

double vortex_f(const VortexParams& vp, double theta);
double vortex_g(const VortexParams& vp, double theta);

/// Throws GridTooSmall unless the support radius sqrt(2 nu) plus two cells
/// fits inside the grid.
FluidState vortex_build(const VortexParams& vp, const Grid& grid);

}  // namespace blowup
