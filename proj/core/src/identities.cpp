#include "blowup/identities.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

namespace {

double rel(double num, double scale, double floor) { return num / std::max(scale, floor); }

}  // namespace

IdentityReport time_series_identities(const std::vector<MomentSet>& series, const GasModel& model,
                                      double scale_floor) {
  if (series.size() < 3) throw Error(ErrorKind::TooFewSnapshots, "need at least 3 snapshots");
  const double dt = series[1].t - series[0].t;
  if (!(dt > 0)) throw Error(ErrorKind::InvalidArgument, "snapshot times must increase");
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double step = series[i].t - series[i - 1].t;
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw Error(ErrorKind::InvalidArgument, "snapshots are not uniformly spaced");
    }
  }

  IdentityReport rep;
  rep.dt = dt;
  const std::size_t last = series.size() - 1;

  {
    double worst = 0, scale = 0;
    for (std::size_t i = 1; i < last; ++i) {
      const double dg = (series[i + 1].G - series[i - 1].G) / (2 * dt);
      worst = std::max(worst, std::abs(dg - series[i].F));
      scale = std::max({scale, std::abs(series[i].F), std::abs(dg)});
    }
    rep.dG_minus_F = rel(worst, scale, scale_floor);
  }

  if (model.force.force_free()) {
    double drift = 0, scale = 0, rise = 0;
    for (std::size_t i = 0; i <= last; ++i) {
      for (std::size_t k = 0; k < series[i].M.size(); ++k) {
        drift = std::max(drift, std::abs(series[i].M[k] - series[0].M[k]));
        scale = std::max(scale, std::abs(series[0].M[k]));
      }
      if (i > 0) rise = std::max(rise, series[i].E - series[i - 1].E);
    }
    // M is conserved, so the natural scale is sqrt(4 G Ek) >= |M|
    scale = std::max(scale, 2.0 * std::sqrt(series[0].G * series[0].Ek));
    rep.angular_momentum = rel(drift, scale, scale_floor);
    rep.energy_increase = rel(std::max(rise, 0.0), std::abs(series[0].E), scale_floor);
  }

  if (const auto* cor = model.force.coriolis()) {
    const double l = cor->l;
    double worst = 0, scale = 0;
    for (std::size_t i = 1; i < last; ++i) {
      if (!series[i + 1].F_perp || !series[i - 1].F_perp) {
        throw Error(ErrorKind::InvalidArgument, "Coriolis identities need 2D moments");
      }
      const double dfp = (*series[i + 1].F_perp - *series[i - 1].F_perp) / (2 * dt);
      worst = std::max(worst, std::abs(dfp + l * series[i].F));
      scale = std::max({scale, std::abs(dfp), std::abs(l * series[i].F)});
    }
    rep.f_perp_rate = rel(worst, scale, scale_floor);

    const double m0 = l * series[0].G + *series[0].F_perp;
    double drift = 0;
    for (const auto& ms : series) drift = std::max(drift, std::abs(l * ms.G + *ms.F_perp - m0));
    const double mscale =
        std::max(std::abs(l * series[0].G) + std::abs(*series[0].F_perp), std::abs(m0));
    rep.rotating_momentum = rel(drift, mscale, scale_floor);
  }
  return rep;
}

}  // namespace blowup
