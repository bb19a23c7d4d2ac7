#include "blowup/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/snapshot_io.hpp"

namespace blowup {

namespace {

constexpr double kTiny = 1e-300;
// Cells lighter than this fraction of max rho are vacuum: their momentum and
// energy are dropped so that round-off cannot produce huge velocities.
constexpr double kVacuumRelative = 1e-12;

// Conserved variables: rho, rho V_1..rho V_n, total energy.
struct Cons {
  const Grid* grid;
  int n;
  std::vector<std::vector<double>> u;

  explicit Cons(const Grid& g) : grid(&g), n(g.dim()), u(static_cast<std::size_t>(g.dim() + 2), std::vector<double>(g.size(), 0.0)) {}
  std::vector<double>& rho() { return u[0]; }
  std::vector<double>& energy() { return u[static_cast<std::size_t>(n + 1)]; }
};

Cons to_cons(const FluidState& s, double gamma) {
  Cons c(s.grid);
  const int n = s.dim();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rho = s.rho[i];
    double ke = 0.0;
    c.u[0][i] = rho;
    for (int a = 0; a < n; ++a) {
      c.u[static_cast<std::size_t>(a + 1)][i] = rho * s.vel[a][i];
      ke += s.vel[a][i] * s.vel[a][i];
    }
    c.u[static_cast<std::size_t>(n + 1)][i] = 0.5 * rho * ke + s.pres[i] / (gamma - 1.0);
  }
  return c;
}

// Velocity and pressure of one cell. Pressure may come out negative.
inline void cell_primitive(const Cons& c, std::size_t i, double gamma, double* v, double& p) {
  const int n = c.n;
  const double rho = c.u[0][i];
  double ke = 0.0;
  for (int a = 0; a < n; ++a) {
    v[a] = rho > kTiny ? c.u[static_cast<std::size_t>(a + 1)][i] / rho : 0.0;
    ke += v[a] * c.u[static_cast<std::size_t>(a + 1)][i];
  }
  p = (gamma - 1.0) * (c.u[static_cast<std::size_t>(n + 1)][i] - 0.5 * ke);
}

FluidState to_state(const Cons& c, double gamma, double t) {
  FluidState s(*c.grid, t);
  double v[3];
  for (std::size_t i = 0; i < s.size(); ++i) {
    double p;
    cell_primitive(c, i, gamma, v, p);
    s.rho[i] = c.u[0][i];
    for (int a = 0; a < c.n; ++a) s.vel[a][i] = v[a];
    s.pres[i] = std::max(p, 0.0);
  }
  return s;
}

inline int wrap(int k, int N, Boundary b) {
  if (b == Boundary::Periodic) return ((k % N) + N) % N;
  return std::clamp(k, 0, N - 1);
}

inline double mc_slope(double dl, double dr) {
  if (dl * dr <= 0.0) return 0.0;
  const double s = dl > 0 ? 1.0 : -1.0;
  return s * std::min({2.0 * std::abs(dl), 2.0 * std::abs(dr), 0.5 * std::abs(dl + dr)});
}

struct Primitive {
  double rho, p;
  double v[3];
};

struct Ctx {
  const GasModel* model;
  const SolverConfig* cfg;
  std::vector<std::vector<std::size_t>> line_bases;  // per axis
};

Ctx make_ctx(const Grid& g, const GasModel& model, const SolverConfig& cfg) {
  Ctx ctx{&model, &cfg, {}};
  ctx.line_bases.resize(static_cast<std::size_t>(g.dim()));
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Index idx = g.unflatten(c);
    for (int a = 0; a < g.dim(); ++a) {
      if (idx[a] == 0) ctx.line_bases[static_cast<std::size_t>(a)].push_back(c);
    }
  }
  return ctx;
}

// LLF flux along axis d for the primitive states L, R. Writes n+2 entries.
void llf_flux(const Primitive& L, const Primitive& R, int d, int n, double gamma, double* out) {
  auto eval = [&](const Primitive& w, double* U, double* F, double& speed) {
    double ke = 0.0;
    for (int a = 0; a < n; ++a) ke += w.v[a] * w.v[a];
    const double E = 0.5 * w.rho * ke + w.p / (gamma - 1.0);
    const double un = w.v[d];
    U[0] = w.rho;
    F[0] = w.rho * un;
    for (int a = 0; a < n; ++a) {
      U[a + 1] = w.rho * w.v[a];
      F[a + 1] = w.rho * un * w.v[a] + (a == d ? w.p : 0.0);
    }
    U[n + 1] = E;
    F[n + 1] = un * (E + w.p);
    const double c = w.rho > kTiny ? std::sqrt(std::max(gamma * w.p / w.rho, 0.0)) : 0.0;
    speed = std::abs(un) + c;
  };
  double UL[5], FL[5], UR[5], FR[5], sL, sR;
  eval(L, UL, FL, sL);
  eval(R, UR, FR, sR);
  const double s = std::max(sL, sR);
  for (int k = 0; k < n + 2; ++k) out[k] = 0.5 * (FL[k] + FR[k]) - 0.5 * s * (UR[k] - UL[k]);
}

void flux_divergence(const Cons& U, const Ctx& ctx, std::vector<std::vector<double>>& dU) {
  const Grid& g = *U.grid;
  const int n = g.dim();
  const int nv = n + 2;
  const double gamma = ctx.model->gamma;
  const bool second = ctx.cfg->scheme == Scheme::MUSCL2;
  const Boundary bc = ctx.cfg->boundary;
  for (auto& a : dU) std::fill(a.begin(), a.end(), 0.0);

  std::vector<Primitive> W;
  std::vector<Primitive> slope;
  std::vector<double> flux;
  for (int d = 0; d < n; ++d) {
    const int N = g.cells(d);
    const std::size_t st = g.stride(d);
    const double inv_h = 1.0 / g.spacing(d);
    W.resize(static_cast<std::size_t>(N + 4));
    slope.resize(static_cast<std::size_t>(N + 4));
    flux.resize(static_cast<std::size_t>((N + 1) * nv));
    for (std::size_t base : ctx.line_bases[static_cast<std::size_t>(d)]) {
      for (int k = -2; k < N + 2; ++k) {
        const int kk = wrap(k, N, bc);
        const std::size_t c = base + static_cast<std::size_t>(kk) * st;
        Primitive& w = W[static_cast<std::size_t>(k + 2)];
        w.rho = U.u[0][c];
        cell_primitive(U, c, gamma, w.v, w.p);
        w.p = std::max(w.p, 0.0);  // outflow ghosts copy the edge cell
      }
      if (second) {
        for (int k = -1; k < N + 1; ++k) {
          const Primitive& a = W[static_cast<std::size_t>(k + 1)];
          const Primitive& b = W[static_cast<std::size_t>(k + 2)];
          const Primitive& c = W[static_cast<std::size_t>(k + 3)];
          Primitive& s = slope[static_cast<std::size_t>(k + 2)];
          s.rho = mc_slope(b.rho - a.rho, c.rho - b.rho);
          s.p = mc_slope(b.p - a.p, c.p - b.p);
          for (int q = 0; q < n; ++q) s.v[q] = mc_slope(b.v[q] - a.v[q], c.v[q] - b.v[q]);
        }
      }
      for (int f = 0; f <= N; ++f) {  // face between cells f-1 and f
        const Primitive& a = W[static_cast<std::size_t>(f + 1)];
        const Primitive& b = W[static_cast<std::size_t>(f + 2)];
        Primitive L = a, R = b;
        if (second) {
          const Primitive& sa = slope[static_cast<std::size_t>(f + 1)];
          const Primitive& sb = slope[static_cast<std::size_t>(f + 2)];
          L.rho += 0.5 * sa.rho;
          L.p += 0.5 * sa.p;
          R.rho -= 0.5 * sb.rho;
          R.p -= 0.5 * sb.p;
          for (int q = 0; q < n; ++q) {
            L.v[q] += 0.5 * sa.v[q];
            R.v[q] -= 0.5 * sb.v[q];
          }
          if (!(L.rho > 0.0) || !(L.p >= 0.0) || !(R.rho > 0.0) || !(R.p >= 0.0)) {
            L = a;
            R = b;
          }
        }
        llf_flux(L, R, d, n, gamma, &flux[static_cast<std::size_t>(f * nv)]);
      }
      for (int k = 0; k < N; ++k) {
        const std::size_t c = base + static_cast<std::size_t>(k) * st;
        const double* fl = &flux[static_cast<std::size_t>(k * nv)];
        const double* fr = &flux[static_cast<std::size_t>((k + 1) * nv)];
        for (int q = 0; q < nv; ++q) dU[static_cast<std::size_t>(q)][c] -= (fr[q] - fl[q]) * inv_h;
      }
    }
  }
}

struct Sanitized {
  bool bad = false;
  std::string trigger;
  std::size_t cell = 0;
  double value = 0.0;
};

// Clips round-off negative pressures; reports non-finite values and negative
// density/pressure inside the monitored region.
Sanitized sanitize(Cons& U, double gamma, double fraction) {
  const int n = U.n;
  const std::size_t N = U.grid->size();
  double rho_max = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (const auto& q : U.u) {
      if (!std::isfinite(q[i])) return {true, "non-finite", i, q[i]};
    }
    rho_max = std::max(rho_max, U.u[0][i]);
  }
  const double watch = fraction * rho_max;
  double v[3];
  for (std::size_t i = 0; i < N; ++i) {
    double& rho = U.u[0][i];
    if (rho < 0.0 && -rho > watch) return {true, "negative-density", i, rho};
    if (rho <= kVacuumRelative * rho_max) {
      rho = std::max(rho, 0.0);
      for (std::size_t q = 1; q < U.u.size(); ++q) U.u[q][i] = 0.0;
      continue;
    }
    double p;
    cell_primitive(U, i, gamma, v, p);
    if (p < 0.0) {
      const double E = U.u[static_cast<std::size_t>(n + 1)][i];
      if (rho > watch && p < -1e-6 * std::abs(E) * (gamma - 1.0)) return {true, "negative-pressure", i, p};
      double ke = 0.0;
      for (int a = 0; a < n; ++a) ke += v[a] * v[a];
      U.u[static_cast<std::size_t>(n + 1)][i] = 0.5 * rho * ke;
    }
  }
  return {};
}

void throw_if_bad(const Sanitized& s) {
  if (!s.bad) return;
  std::ostringstream os;
  os << s.trigger << " at cell " << s.cell << " (value " << s.value << ")";
  throw Error(s.trigger == "non-finite" ? ErrorKind::NonFinite : ErrorKind::NegativePressure, os.str());
}

// Velocity gradient (row-major d_a V_b) at a cell with boundary-aware differences.
double grad_norm2(const std::vector<std::vector<double>>& vel, const Grid& g, const Index& idx,
                  Boundary bc) {
  const int n = g.dim();
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const int N = g.cells(a);
    const int i = idx[a];
    Index lo = idx, hi = idx;
    lo[a] = wrap(i - 1, N, bc);
    hi[a] = wrap(i + 1, N, bc);
    const double span = (bc == Boundary::Periodic || (i > 0 && i < N - 1)) ? 2.0 : 1.0;
    const std::size_t cl = g.flatten(lo), ch = g.flatten(hi);
    for (int b = 0; b < n; ++b) {
      const double d = (vel[b][ch] - vel[b][cl]) / (span * g.spacing(a));
      s += d * d;
    }
  }
  return s;
}

void apply_sources(Cons& U, const GasModel& model, double t, double dt) {
  const auto* fr = model.force.friction();
  const auto* cor = model.force.coriolis();
  if (!fr && !cor) return;
  const Grid& g = *U.grid;
  const int n = U.n;
  double v[3];
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = U.u[0][i];
    if (!(rho > kTiny)) continue;
    double p;
    cell_primitive(U, i, model.gamma, v, p);
    double ke_old = 0.0;
    for (int a = 0; a < n; ++a) ke_old += U.u[static_cast<std::size_t>(a + 1)][i] * v[a];
    if (fr) {
      const double damp = std::exp(-fr->at(t, g.center(i)) * dt);
      for (int a = 0; a < n; ++a) U.u[static_cast<std::size_t>(a + 1)][i] *= damp;
    }
    if (cor) {
      const double th = cor->l * dt;
      const double m1 = U.u[1][i], m2 = U.u[2][i];
      U.u[1][i] = m1 * std::cos(th) + m2 * std::sin(th);
      U.u[2][i] = -m1 * std::sin(th) + m2 * std::cos(th);
    }
    double ke_new = 0.0;
    for (int a = 0; a < n; ++a) {
      const double m = U.u[static_cast<std::size_t>(a + 1)][i];
      ke_new += m * m / rho;
    }
    U.u[static_cast<std::size_t>(n + 1)][i] += 0.5 * (ke_new - ke_old);
  }
}

void apply_viscosity(Cons& U, const GasModel& model, const SolverConfig& cfg, double dt) {
  const auto* visc = model.force.viscosity();
  if (!visc) return;
  const Grid& g = *U.grid;
  const int n = U.n;
  const std::size_t N = g.size();
  const Boundary bc = cfg.boundary;
  std::vector<std::vector<double>> vel(static_cast<std::size_t>(n), std::vector<double>(N));
  double v[3];
  double rho_max = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double p;
    cell_primitive(U, i, model.gamma, v, p);
    for (int a = 0; a < n; ++a) vel[static_cast<std::size_t>(a)][i] = v[a];
    rho_max = std::max(rho_max, U.u[0][i]);
  }
  auto deriv = [&](const std::vector<double>& f, const Index& idx, int a) {
    const int Nn = g.cells(a), i = idx[a];
    Index lo = idx, hi = idx;
    lo[a] = wrap(i - 1, Nn, bc);
    hi[a] = wrap(i + 1, Nn, bc);
    const double span = (bc == Boundary::Periodic || (i > 0 && i < Nn - 1)) ? 2.0 : 1.0;
    return (f[g.flatten(hi)] - f[g.flatten(lo)]) / (span * g.spacing(a));
  };
  // T_ab = mu (d_a V_b + d_b V_a) + lambda div V delta_ab, stored per (a, b).
  std::vector<std::vector<double>> T(static_cast<std::size_t>(n * n), std::vector<double>(N));
  for (std::size_t c = 0; c < N; ++c) {
    const Index idx = g.unflatten(c);
    double J[3][3];
    double div = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) J[a][b] = deriv(vel[static_cast<std::size_t>(b)], idx, a);
      div += J[a][a];
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        T[static_cast<std::size_t>(a * n + b)][c] = visc->mu * (J[a][b] + J[b][a]) + (a == b ? visc->lambda * div : 0.0);
      }
    }
  }
  const double watch = cfg.detector.density_fraction * rho_max;
  for (std::size_t c = 0; c < N; ++c) {
    const double rho = U.u[0][c];
    if (!(rho > watch)) continue;
    const Index idx = g.unflatten(c);
    double ke_old = 0.0, ke_new = 0.0;
    for (int b = 0; b < n; ++b) {
      double divT = 0.0;
      for (int a = 0; a < n; ++a) divT += deriv(T[static_cast<std::size_t>(a * n + b)], idx, a);
      double& m = U.u[static_cast<std::size_t>(b + 1)][c];
      ke_old += m * m / rho;
      m += dt * divT;
      ke_new += m * m / rho;
    }
    U.u[static_cast<std::size_t>(n + 1)][c] += 0.5 * (ke_new - ke_old);
  }
}

double cons_dt(const Cons& U, const GasModel& model, const SolverConfig& cfg) {
  const Grid& g = *U.grid;
  const int n = U.n;
  double rate = 0.0;
  double v[3];
  double rho_max = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) rho_max = std::max(rho_max, U.u[0][i]);
  double rho_min_watch = rho_max;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = U.u[0][i];
    double p;
    cell_primitive(U, i, model.gamma, v, p);
    const double c = rho > kTiny ? std::sqrt(std::max(model.gamma * p / rho, 0.0)) : 0.0;
    double r = 0.0;
    for (int a = 0; a < n; ++a) r += (std::abs(v[a]) + c) / g.spacing(a);
    rate = std::max(rate, r);
    if (rho > cfg.detector.density_fraction * rho_max) rho_min_watch = std::min(rho_min_watch, rho);
  }
  double dt = rate > 0.0 ? cfg.cfl / rate : std::numeric_limits<double>::infinity();
  if (const auto* visc = model.force.viscosity()) {
    const double nu = (2.0 * visc->mu + std::abs(visc->lambda)) / std::max(rho_min_watch, kTiny);
    double hmin = g.spacing(0);
    for (int a = 1; a < n; ++a) hmin = std::min(hmin, g.spacing(a));
    if (nu > 0.0) dt = std::min(dt, 0.25 * hmin * hmin / (n * nu));
  }
  return dt;
}

void hyperbolic_update(Cons& U, const Ctx& ctx, double dt) {
  const double gamma = ctx.model->gamma;
  const double frac = ctx.cfg->detector.density_fraction;
  std::vector<std::vector<double>> dU(U.u.size(), std::vector<double>(U.grid->size()));
  flux_divergence(U, ctx, dU);
  if (ctx.cfg->scheme == Scheme::LLF1) {
    for (std::size_t q = 0; q < U.u.size(); ++q) {
      for (std::size_t i = 0; i < U.u[q].size(); ++i) U.u[q][i] += dt * dU[q][i];
    }
    throw_if_bad(sanitize(U, gamma, frac));
    return;
  }
  Cons U1 = U;
  for (std::size_t q = 0; q < U.u.size(); ++q) {
    for (std::size_t i = 0; i < U.u[q].size(); ++i) U1.u[q][i] += dt * dU[q][i];
  }
  throw_if_bad(sanitize(U1, gamma, frac));
  flux_divergence(U1, ctx, dU);
  for (std::size_t q = 0; q < U.u.size(); ++q) {
    for (std::size_t i = 0; i < U.u[q].size(); ++i) {
      U.u[q][i] = 0.5 * U.u[q][i] + 0.5 * (U1.u[q][i] + dt * dU[q][i]);
    }
  }
  throw_if_bad(sanitize(U, gamma, frac));
}

void full_step(Cons& U, const Ctx& ctx, double t, double dt) {
  const GasModel& model = *ctx.model;
  apply_sources(U, model, t, 0.5 * dt);
  apply_viscosity(U, model, *ctx.cfg, 0.5 * dt);
  hyperbolic_update(U, ctx, dt);
  apply_viscosity(U, model, *ctx.cfg, 0.5 * dt);
  apply_sources(U, model, t + 0.5 * dt, 0.5 * dt);
  throw_if_bad(sanitize(U, model.gamma, ctx.cfg->detector.density_fraction));
}

double total_mass(const Cons& U) {
  double m = 0.0;
  for (double r : U.u[0]) m += r;
  return m * U.grid->cell_volume();
}

double max_sound_speed(const FluidState& s, double gamma) {
  double c = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.rho[i] > kTiny) c = std::max(c, std::sqrt(gamma * s.pres[i] / s.rho[i]));
  }
  return c;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw Error(ErrorKind::InvalidArgument, "CFL must lie in (0, 1)");
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be positive");
  if (!(snapshot_interval > 0.0)) throw Error(ErrorKind::InvalidArgument, "snapshot interval must be positive");
  if (!(detector.grad_factor > 0.0) || !(detector.dt_floor > 0.0) ||
      !(detector.density_fraction > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "detector thresholds must be positive");
  }
  if (max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be positive");
}

std::string BlowupEvent::describe() const {
  std::ostringstream os;
  os << std::setprecision(17) << "t=" << t << " trigger=" << trigger << " x=(" << location[0] << ','
     << location[1] << ',' << location[2] << ") value=" << value;
  return os.str();
}

double stable_dt(const FluidState& state, const GasModel& model, const SolverConfig& cfg) {
  return cons_dt(to_cons(state, model.gamma), model, cfg);
}

FluidState step(const FluidState& state, const GasModel& model, const SolverConfig& cfg, double dt_max) {
  cfg.validate();
  model.validate(state.grid, state.t);
  if (state.dim() > 2) throw Error(ErrorKind::InvalidArgument, "solver supports 1D and 2D only");
  if (model.dim != state.dim()) throw Error(ErrorKind::NonconformingArrays, "model and state dimension differ");
  state.validate();
  Cons U = to_cons(state, model.gamma);
  const Ctx ctx = make_ctx(state.grid, model, cfg);
  const double dt = std::min(cons_dt(U, model, cfg), dt_max);
  full_step(U, ctx, state.t, dt);
  return to_state(U, model.gamma, state.t + dt);
}

double max_velocity_gradient(const FluidState& s, double fraction, Boundary bc, Point* where) {
  const Grid& g = s.grid;
  const double watch = fraction * s.max_density();
  double best = 0.0;
  std::size_t at = 0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!(s.rho[c] > watch)) continue;
    const double v = grad_norm2(s.vel, g, g.unflatten(c), bc);
    if (v > best) {
      best = v;
      at = c;
    }
  }
  if (where) *where = g.center(at);
  return std::sqrt(best);
}

std::vector<double> total_momentum(const FluidState& s) {
  std::vector<double> P(static_cast<std::size_t>(s.dim()), 0.0);
  const double vol = s.grid.cell_volume();
  for (std::size_t c = 0; c < s.size(); ++c) {
    for (int a = 0; a < s.dim(); ++a) P[static_cast<std::size_t>(a)] += s.rho[c] * s.vel[a][c] * vol;
  }
  return P;
}

RunResult run(const FluidState& state0, const GasModel& model, const SolverConfig& cfg) {
  cfg.validate();
  model.validate(state0.grid, state0.t);
  if (state0.dim() > 2) throw Error(ErrorKind::InvalidArgument, "solver supports 1D and 2D only");
  if (model.dim != state0.dim()) throw Error(ErrorKind::NonconformingArrays, "model and state dimension differ");
  state0.validate();

  const Grid& g = state0.grid;
  const Ctx ctx = make_ctx(g, model, cfg);
  const Detector& det = cfg.detector;
  const bool force_free = model.force.force_free();

  RunResult res;
  double R_min = g.half_width(0);
  for (int a = 1; a < g.dim(); ++a) R_min = std::min(R_min, g.half_width(a));
  res.reference_gradient = std::max(max_velocity_gradient(state0, det.density_fraction, cfg.boundary),
                                    max_sound_speed(state0, model.gamma) / R_min);
  if (!(res.reference_gradient > 0.0)) res.reference_gradient = 1.0 / R_min;

  const double m0 = [&] {
    double m = 0.0;
    for (double r : state0.rho) m += r;
    return m * g.cell_volume();
  }();
  const std::vector<double> P0 = total_momentum(state0);
  double p_scale = 0.0;
  for (std::size_t c = 0; c < state0.size(); ++c) {
    double sp = 0.0;
    for (int a = 0; a < state0.dim(); ++a) sp += state0.vel[a][c] * state0.vel[a][c];
    p_scale += state0.rho[c] * std::sqrt(sp);
  }
  p_scale = std::max(p_scale * g.cell_volume(), kTiny);

  auto record = [&](const FluidState& s) {
    res.moments.push_back(compute_moments(s, model, cfg.quadrature));
    LedgerEntry e;
    e.t = s.t;
    double m = 0.0;
    for (double r : s.rho) m += r;
    m *= g.cell_volume();
    e.mass_error = m0 > 0.0 ? (m - m0) / m0 : m - m0;
    if (force_free) {
      const auto P = total_momentum(s);
      std::vector<double> err(P.size());
      for (std::size_t a = 0; a < P.size(); ++a) err[a] = (P[a] - P0[a]) / p_scale;
      e.momentum_error = err;
    }
    res.ledger.push_back(e);
    if (cfg.keep_snapshots) res.snapshots.push_back(s);
  };

  Cons U = to_cons(state0, model.gamma);
  double t = state0.t;
  const double t_stop = state0.t + cfg.t_end;
  long snap_index = 1;
  record(state0);
  FluidState current = state0;
  double mass_prev = total_mass(U);

  auto fire = [&](const std::string& trigger, const Point& x, double value) {
    res.event = BlowupEvent{t, trigger, x, value};
  };

  while (t < t_stop - 1e-12 * std::max(1.0, std::abs(t_stop))) {
    if (res.steps >= cfg.max_steps) {
      fire("max-steps", Point{0, 0, 0}, static_cast<double>(res.steps));
      break;
    }
    const double t_snap = std::min(state0.t + snap_index * cfg.snapshot_interval, t_stop);
    double dt = cons_dt(U, model, cfg);
    if (!(dt >= det.dt_floor)) {
      fire("dt-floor", Point{0, 0, 0}, dt);
      break;
    }
    bool lands = false;
    if (t + dt >= t_snap - 1e-12 * std::max(1.0, t_snap)) {
      dt = t_snap - t;
      lands = true;
    }
    Cons trial = U;
    try {
      full_step(trial, ctx, t, dt);
    } catch (const Error& e) {
      const std::string what = e.kind() == ErrorKind::NonFinite ? "non-finite" : "negative-pressure";
      fire(what, Point{0, 0, 0}, dt);
      break;
    }
    U = std::move(trial);
    t = lands ? t_snap : t + dt;
    ++res.steps;
    const double mass_now = total_mass(U);
    if (m0 > 0.0) res.max_step_mass_error = std::max(res.max_step_mass_error, std::abs(mass_now - mass_prev) / m0);
    mass_prev = mass_now;

    current = to_state(U, model.gamma, t);
    Point where;
    const double grad = max_velocity_gradient(current, det.density_fraction, cfg.boundary, &where);
    const double ratio = grad / res.reference_gradient;
    res.max_gradient_ratio = std::max(res.max_gradient_ratio, ratio);
    if (lands) {
      record(current);
      ++snap_index;
    }
    if (ratio > det.grad_factor) {
      fire("gradient", where, ratio);
      if (!lands) record(current);
      break;
    }
  }
  return res;
}

void write_run_result(const std::string& dir, const RunResult& result, double gamma) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(4) << std::setfill('0') << i << ".bin";
    write_snapshot_file((fs::path(dir) / name.str()).string(), Snapshot{result.snapshots[i], gamma});
  }
  write_moments_csv((fs::path(dir) / "moments.csv").string(), result.moments);
  {
    std::ofstream out(fs::path(dir) / "ledger.csv");
    if (!out) throw Error(ErrorKind::Io, "cannot write ledger.csv");
    out << "t,mass_error,momentum_error\n" << std::setprecision(17);
    for (const auto& e : result.ledger) {
      out << e.t << ',' << e.mass_error << ',';
      if (e.momentum_error) {
        double worst = 0.0;
        for (double v : *e.momentum_error) worst = std::max(worst, std::abs(v));
        out << worst;
      }
      out << '\n';
    }
  }
  std::ofstream ev(fs::path(dir) / "events.txt");
  if (!ev) throw Error(ErrorKind::Io, "cannot write events.txt");
  if (result.event) ev << result.event->describe() << '\n';
}

}  // namespace blowup
