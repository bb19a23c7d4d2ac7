#include "blowup/residual.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

namespace {

EulerResidual residual_impl(const FluidState* prev, const FluidState& s, const FluidState* next,
                            const GasModel& model) {
  model.validate();
  if (model.force.viscosity()) {
    throw Error(ErrorKind::InvalidArgument, "residual evaluator does not handle viscosity");
  }
  const Grid& g = s.grid;
  const int n = g.dim();
  if (model.dim != n) throw Error(ErrorKind::NonconformingArrays, "model and state dimension differ");
  double inv2dt = 0.0;
  if (prev) {
    if (!(prev->grid == g) || !(next->grid == g)) {
      throw Error(ErrorKind::NonconformingArrays, "residual states live on different grids");
    }
    const double dt = s.t - prev->t;
    if (!(dt > 0) || std::abs((next->t - s.t) - dt) > 1e-9 * dt) {
      throw Error(ErrorKind::InvalidArgument, "residual states must be equally spaced in time");
    }
    inv2dt = 0.5 / dt;
  }
  const double gamma = model.gamma;
  const auto* fr = model.force.friction();
  const auto* cor = model.force.coriolis();

  EulerResidual r;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Index idx = g.unflatten(c);
    if (g.shell(idx) < 1) continue;

    auto ddx = [&](const std::vector<double>& f, int a) {
      const std::size_t st = g.stride(a);
      return (f[c + st] - f[c - st]) / (2.0 * g.spacing(a));
    };
    auto dflux = [&](int a) {  // d_a (rho V_a)
      const std::size_t st = g.stride(a);
      const auto& v = s.vel[a];
      return (s.rho[c + st] * v[c + st] - s.rho[c - st] * v[c - st]) / (2.0 * g.spacing(a));
    };
    auto ddt = [&](auto pick) {
      return prev ? (pick(*next) - pick(*prev)) * inv2dt : 0.0;
    };

    const double rho = s.rho[c];
    double div_rho_v = 0, div_v = 0, v_grad_p = 0;
    for (int a = 0; a < n; ++a) {
      div_rho_v += dflux(a);
      div_v += ddx(s.vel[a], a);
      v_grad_p += s.vel[a][c] * ddx(s.pres, a);
    }
    const double rho_t = ddt([&](const FluidState& q) { return q.rho[c]; });
    r.continuity = std::max(r.continuity, std::abs(rho_t + div_rho_v));

    const double p_t = ddt([&](const FluidState& q) { return q.pres[c]; });
    r.pressure = std::max(r.pressure, std::abs(p_t + v_grad_p + gamma * s.pres[c] * div_v));

    const Point x = g.center(idx);
    for (int b = 0; b < n; ++b) {
      const double vt = ddt([&](const FluidState& q) { return q.vel[b][c]; });
      double adv = 0;
      for (int a = 0; a < n; ++a) adv += s.vel[a][c] * ddx(s.vel[b], a);
      double res = rho * (vt + adv) + ddx(s.pres, b);
      if (fr) res += fr->at(s.t, x) * rho * s.vel[b][c];
      if (cor) {
        const double vperp = b == 0 ? s.vel[1][c] : -s.vel[0][c];
        res -= cor->l * rho * vperp;
      }
      r.momentum = std::max(r.momentum, std::abs(res));
    }
  }
  return r;
}

}  // namespace

double EulerResidual::max() const { return std::max({continuity, momentum, pressure}); }

EulerResidual euler_residual(const FluidState& prev, const FluidState& mid, const FluidState& next,
                             const GasModel& model) {
  return residual_impl(&prev, mid, &next, model);
}

EulerResidual steady_residual(const FluidState& state, const GasModel& model) {
  return residual_impl(nullptr, state, nullptr, model);
}

}  // namespace blowup
