#include "blowup/vortex.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

void VortexParams::validate() const {
  if (l == 0.0) throw Error(ErrorKind::InvalidArgument, "vortex needs l != 0");
  if (!(nu > 0.0)) throw Error(ErrorKind::InvalidArgument, "vortex needs nu > 0");
  if (!(A_state > 0.0)) throw Error(ErrorKind::InvalidArgument, "vortex needs A > 0");
  if (!(gamma > 1.0)) throw Error(ErrorKind::DomainError, "gamma must exceed 1");
  if (C_offset < 0.0) throw Error(ErrorKind::InvalidArgument, "C_offset must be non-negative");
}

double vortex_f(const VortexParams& vp, double theta) {
  if (theta >= vp.nu) return 0.0;
  return vp.l / vp.nu * (vp.nu - theta);
}

double vortex_g(const VortexParams& vp, double theta) {
  if (theta >= vp.nu) return vp.C_offset;
  const double core = vp.l * vp.l / (6.0 * vp.K() * vp.nu * vp.nu) *
                      (vp.nu * vp.nu * vp.nu + theta * theta * (2.0 * theta - 3.0 * vp.nu));
  return vp.C_offset + std::max(core, 0.0);
}

FluidState vortex_build(const VortexParams& vp, const Grid& grid) {
  vp.validate();
  if (grid.dim() != 2) throw Error(ErrorKind::InvalidArgument, "vortex is two-dimensional");
  const double radius = std::sqrt(2.0 * vp.nu);
  for (int a = 0; a < 2; ++a) {
    if (radius + 2.0 * grid.spacing(a) >= grid.half_width(a)) {
      throw Error(ErrorKind::GridTooSmall, "vortex support does not fit inside the grid");
    }
  }
  const double expo = 1.0 / (vp.gamma - 1.0);
  FluidState s(grid, 0.0);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Point x = grid.center(c);
    const double theta = 0.5 * (x[0] * x[0] + x[1] * x[1]);
    const double f = vortex_f(vp, theta);
    const double rho = std::pow(vortex_g(vp, theta), expo);
    s.rho[c] = rho;
    s.vel[0][c] = f * x[1];
    s.vel[1][c] = -f * x[0];
    s.pres[c] = vp.A_state * std::pow(rho, vp.gamma);
  }
  return s;
}

}  // namespace blowup
