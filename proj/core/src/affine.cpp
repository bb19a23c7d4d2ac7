#include "blowup/affine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>

#include "blowup/error.hpp"

namespace blowup {

namespace {

using Vec2 = std::array<double, 2>;  // (G1, alpha)

struct Rhs {
  double c;      // (n/2)(gamma-1) K
  double power;  // (gamma-1)n/2 + 1

  Vec2 operator()(const Vec2& y) const {
    return {-2.0 * y[1] * y[0], -y[1] * y[1] + c * std::pow(y[0], power)};
  }
};

Vec2 rk4(const Rhs& f, const Vec2& y, double h) {
  auto axpy = [](const Vec2& a, double s, const Vec2& b) { return Vec2{a[0] + s * b[0], a[1] + s * b[1]}; };
  const Vec2 k1 = f(y);
  const Vec2 k2 = f(axpy(y, 0.5 * h, k1));
  const Vec2 k3 = f(axpy(y, 0.5 * h, k2));
  const Vec2 k4 = f(axpy(y, h, k3));
  return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

Rhs make_rhs(const AffineParams& p) {
  const double gn = (p.gamma - 1.0) * p.n;
  return {0.5 * gn * p.K(), 0.5 * gn + 1.0};
}

void check_step(const Vec2& y) {
  if (!(y[0] > 0.0) || !std::isfinite(y[0]) || !std::isfinite(y[1])) {
    throw Error(ErrorKind::StepRejected, "affine step left the positive cone; reduce dt");
  }
}

// int_{R^n} (1 + |x|^2)^{-b} dx
double power_integral(int n, double b) {
  return std::pow(std::numbers::pi, 0.5 * n) * std::exp(std::lgamma(b - 0.5 * n) - std::lgamma(b));
}

}  // namespace

double AffineParams::K() const { return Ep0 * std::pow(G0, 0.5 * (gamma - 1.0) * n); }

void AffineParams::validate() const {
  if (!(gamma > 1.0)) throw Error(ErrorKind::DomainError, "gamma must exceed 1");
  if (n < 1 || n > 3) throw Error(ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
  if (!(G0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "G0 must be positive");
  if (Ep0 < 0.0) throw Error(ErrorKind::InvalidArgument, "Ep0 must be non-negative");
  if (!(a > 0.5 * n)) throw Error(ErrorKind::InvalidArgument, "profile exponent a must exceed n/2");
  if (!std::isfinite(alpha0)) throw Error(ErrorKind::InvalidArgument, "alpha0 must be finite");
}

AffineProfile affine_profile(const AffineParams& p) {
  p.validate();
  const double Ia = power_integral(p.n, p.a);
  const double J = p.n / (2.0 * p.a) * Ia;  // int |x|^2 (1+|x|^2)^{-a-1}
  AffineProfile pr;
  pr.rho_amp = 2.0 * p.G0 / J;
  pr.p_amp = p.Ep0 * (p.gamma - 1.0) / Ia;
  pr.mass = pr.rho_amp * power_integral(p.n, p.a + 1.0);
  pr.S0 = pr.p_amp > 0.0 ? std::log(pr.p_amp) - p.gamma * std::log(pr.rho_amp)
                         : -std::numeric_limits<double>::infinity();
  return pr;
}

MomentSet affine_initial_moments(const AffineParams& p) {
  const AffineProfile pr = affine_profile(p);
  MomentSet ms;
  ms.t = 0.0;
  ms.dim = p.n;
  ms.m = pr.mass;
  ms.G = p.G0;
  ms.F = 2.0 * p.alpha0 * p.G0;
  if (p.n == 2) ms.F_perp = 0.0;
  ms.M.assign(static_cast<std::size_t>(p.n * (p.n - 1) / 2), 0.0);
  ms.Ek = p.alpha0 * p.alpha0 * p.G0;
  ms.Ep = p.Ep0;
  ms.E = ms.Ek + ms.Ep;
  ms.I1 = 2.0 * ms.Ek;
  ms.I2 = 0.0;
  ms.I3 = p.n * (p.gamma - 1.0) * p.Ep0;
  ms.I3_direct = ms.I3;
  return ms;
}

AffineTrajectory affine_integrate(const AffineParams& p, double t_end, double dt, int stride) {
  p.validate();
  if (!(dt > 0.0) || !(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt and t_end must be positive");
  if (stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be at least 1");
  const Rhs f = make_rhs(p);
  const long steps = std::max(1L, std::lround(std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);

  AffineTrajectory tr;
  tr.dt = h;
  tr.stride = stride;
  tr.K = p.K();
  Vec2 y{p.G1_0(), p.alpha0};
  Vec2 yh = y;  // shadow solution at h/2 for the error estimate
  tr.t.push_back(0.0);
  tr.G1.push_back(y[0]);
  tr.alpha.push_back(y[1]);
  for (long s = 1; s <= steps; ++s) {
    y = rk4(f, y, h);
    check_step(y);
    yh = rk4(f, rk4(f, yh, 0.5 * h), 0.5 * h);
    for (int c = 0; c < 2; ++c) {
      const double e = std::abs(y[c] - yh[c]) / 15.0 / std::max(1.0, std::abs(yh[c]));
      tr.error_estimate = std::max(tr.error_estimate, e);
    }
    if (s % stride == 0 || s == steps) {
      tr.t.push_back(s == steps ? t_end : s * h);
      tr.G1.push_back(y[0]);
      tr.alpha.push_back(y[1]);
    }
  }
  return tr;
}

AffinePoint affine_at(const AffineTrajectory& traj, const AffineParams& p, double t) {
  if (traj.t.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  const double tol = 1e-12 * std::max(1.0, traj.t_end());
  if (t < -tol || t > traj.t_end() + tol) throw Error(ErrorKind::OutOfRange, "t outside trajectory");
  t = std::clamp(t, 0.0, traj.t_end());
  auto it = std::upper_bound(traj.t.begin(), traj.t.end(), t);
  const std::size_t i = static_cast<std::size_t>(std::distance(traj.t.begin(), it)) - 1;
  Vec2 y{traj.G1[i], traj.alpha[i]};
  double left = t - traj.t[i];
  if (left > tol) {
    const Rhs f = make_rhs(p);
    // Re-run the RK4 grid from the sample so that sample points are reproduced exactly.
    while (left > traj.dt * (1.0 + 1e-12)) {
      y = rk4(f, y, traj.dt);
      left -= traj.dt;
    }
    if (left > 0.0) y = rk4(f, y, left);
    check_step(y);
  }
  return {t, y[1], y[0]};
}

double affine_Ep(const AffineParams& p, const AffinePoint& pt) {
  return p.K() / std::pow(pt.G(), 0.5 * (p.gamma - 1.0) * p.n);
}

namespace {

FluidState fields_at(const AffineParams& p, const AffinePoint& pt, const Grid& grid) {
  if (grid.dim() != p.n) throw Error(ErrorKind::NonconformingArrays, "grid dimension differs from n");
  const AffineProfile pr = affine_profile(p);
  const double shrink = std::sqrt(p.G0 * pt.G1);  // e^{-A}
  const double rho_scale = std::pow(shrink, p.n);
  const double p_scale = std::pow(shrink, p.n * p.gamma);
  FluidState s(grid, pt.t);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Point x = grid.center(c);
    double r2 = 0.0;
    for (int a = 0; a < p.n; ++a) r2 += x[a] * x[a];
    const double q = 1.0 + r2 * shrink * shrink;
    s.rho[c] = rho_scale * pr.rho_amp * std::pow(q, -(p.a + 1.0));
    s.pres[c] = p_scale * pr.p_amp * std::pow(q, -p.a);
    for (int a = 0; a < p.n; ++a) s.vel[a][c] = pt.alpha * x[a];
  }
  return s;
}

}  // namespace

FluidState affine_fields(const AffineTrajectory& traj, const AffineParams& p, double t,
                         const Grid& grid) {
  return fields_at(p, affine_at(traj, p, t), grid);
}

FluidState affine_initial_fields(const AffineParams& p, const Grid& grid) {
  return fields_at(p, AffinePoint{0.0, p.alpha0, p.G1_0()}, grid);
}

double compatibility_check(const FluidState& s, double G1_0, double Ep0, double gamma) {
  const Grid& g = s.grid;
  const int n = g.dim();
  const double c = 0.5 * n * (gamma - 1.0) * G1_0 * Ep0;
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Index idx = g.unflatten(k);
    if (g.shell(idx) < 1) continue;
    const Point x = g.center(idx);
    double norm2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const std::size_t st = g.stride(a);
      const double dp = (s.pres[k + st] - s.pres[k - st]) / (2.0 * g.spacing(a));
      const double r = dp + c * s.rho[k] * x[a];
      norm2 += r * r;
    }
    worst = std::max(worst, std::sqrt(norm2));
  }
  return worst;
}

ThresholdSearchResult theorem22_evaluate(const AffineParams& base, double alpha0, double epsilon) {
  AffineParams p = base;
  p.alpha0 = alpha0;
  const AffineProfile pr = affine_profile(p);
  const MomentSet ms = affine_initial_moments(p);
  ThresholdSearchResult r;
  r.alpha0 = alpha0;
  r.chemin = criteria::chemin_constant(p.gamma, p.n, pr.mass, pr.S0);
  const auto tc = criteria::threshold_constants(ms, r.chemin, p.gamma, p.n);
  const double seg = 2.0 * std::sqrt(ms.E * ms.G);
  r.F0 = ms.F;
  if (tc.L == 0.0) {
    r.rhs_blowup = tc.k * seg;
    r.rhs_relaxed = seg / tc.k - epsilon;
  } else {
    r.rhs_blowup = tc.L2 * criteria::guarded_cot(tc.L1 / seg);
    r.rhs_relaxed = tc.L1 * criteria::guarded_cot(tc.L2 / seg) - epsilon;
  }
  r.gap_blowup = r.rhs_blowup - r.F0;
  r.margin_relaxed = r.F0 - r.rhs_relaxed;
  r.blowup_condition_fails = r.F0 < r.rhs_blowup;
  const double gpow = std::pow(p.G0, 0.5 + 0.25 * (p.gamma - 1.0) * p.n);
  const double root_c = std::sqrt(2.0 * p.n * (p.gamma - 1.0) * r.chemin.C);
  r.z = alpha0 > 0.0 ? root_c / (2.0 * gpow * alpha0) : std::numeric_limits<double>::infinity();
  r.lambda = alpha0 * gpow / std::sqrt(alpha0 * alpha0 * gpow * gpow + p.K());
  return r;
}

ThresholdSearchResult theorem22_search(const AffineParams& p, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  p.validate();
  constexpr double kMaxAlpha = 1e12;
  auto ok = [&](double a) { return theorem22_evaluate(p, a, epsilon).margin_relaxed > 0.0; };
  double lo = 0.0, hi = 1e-3;
  if (ok(hi)) return theorem22_evaluate(p, hi, epsilon);
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxAlpha) throw Error(ErrorKind::SearchFailed, "no alpha0 up to 1e12 satisfies the relaxed condition");
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return theorem22_evaluate(p, hi, epsilon);
}

void write_trajectory_csv(const std::string& path, const AffineTrajectory& traj,
                          const AffineParams& p) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  out << "t,alpha,G1,G,F,Ep\n" << std::setprecision(17);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const AffinePoint pt{traj.t[i], traj.alpha[i], traj.G1[i]};
    out << pt.t << ',' << pt.alpha << ',' << pt.G1 << ',' << pt.G() << ',' << pt.F() << ','
        << affine_Ep(p, pt) << '\n';
  }
}

}  // namespace blowup
