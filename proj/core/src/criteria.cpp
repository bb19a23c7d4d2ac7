#include "blowup/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blowup/error.hpp"

namespace blowup::criteria {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRootTol = 1e-10;

void require_positive_energy(const MomentSet& ms) {
  if (!(ms.E > 0.0) || !(ms.G > 0.0)) {
    throw Error(ErrorKind::DegenerateData, "criterion needs E(0) > 0 and G(0) > 0");
  }
}

// Smallest t > 0 with pred(t) true for a predicate that is false at 0 and
// monotone in t. Returns +inf when pred never becomes true below t_cap.
template <class Pred>
double first_time(Pred pred, double t_cap = 1e15) {
  double lo = 0.0, hi = 1.0;
  while (!pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > t_cap) return kInf;
  }
  for (int it = 0; it < 400 && hi - lo > kRootTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

CriterionReport make_report(Tag tag, bool satisfied, double lhs, double rhs) {
  CriterionReport r;
  r.tag = tag;
  r.satisfied = satisfied;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  return r;
}

}  // namespace

double guarded_cot(double x) {
  const double c = std::clamp(x, kCotGuard, kPi - kCotGuard);
  return std::cos(c) / std::sin(c);
}

double unit_ball_volume(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

CheminConstant chemin_constant(double gamma, int n, double m, double S0) {
  if (!(gamma > 1.0)) throw Error(ErrorKind::DomainError, "gamma must exceed 1");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (m < 0.0) throw Error(ErrorKind::InvalidArgument, "mass must be non-negative");
  CheminConstant cc;
  cc.m = m;
  cc.S0 = S0;
  cc.gamma = gamma;
  cc.n = n;
  const double d = (n + 2) * gamma - n;
  const double b = 2.0 * gamma / (n * (gamma - 1.0));
  cc.C_gamma_n = std::pow(b, n * (gamma - 1.0) / d) + std::pow(b, -2.0 * gamma / d);
  if (m == 0.0) {
    cc.degenerate = true;
    cc.C = 0.0;
    return cc;
  }
  cc.C = std::exp(S0) / (gamma - 1.0) * std::pow(m / cc.C_gamma_n, 0.5 * d);
  return cc;
}

CheminConstant chemin_constant(const FluidState& state, const MomentSet& ms, double gamma) {
  const double s0 = state.min_entropy(gamma);
  if (std::isinf(s0) && s0 > 0) {
    CheminConstant cc = chemin_constant(gamma, state.dim(), 0.0, 0.0);
    cc.degenerate = true;
    return cc;
  }
  return chemin_constant(gamma, state.dim(), ms.m, s0);
}

std::string_view tag_name(Tag tag) {
  switch (tag) {
    case Tag::T2_1: return "T2.1";
    case Tag::T3_1a: return "T3.1a";
    case Tag::T3_1b: return "T3.1b";
    case Tag::T3_1c: return "T3.1c";
    case Tag::T3_1d: return "T3.1d";
    case Tag::T3_1e: return "T3.1e";
    case Tag::T4_1: return "T4.1";
    case Tag::T5_1_53: return "T5.1-53";
    case Tag::T5_1_54: return "T5.1-54";
    case Tag::R5_1: return "R5.1";
  }
  return "?";
}

ThresholdConstants threshold_constants(const MomentSet& ms0, const CheminConstant& cc,
                                       double gamma, int n) {
  if (!(gamma > 1.0)) throw Error(ErrorKind::DomainError, "gamma must exceed 1");
  const double gn = (gamma - 1.0) * n;
  const double Mn = ms0.M_norm();
  ThresholdConstants tc;
  tc.L = std::sqrt(2.0 * gn * cc.C * std::pow(ms0.G, 1.0 - 0.5 * gn) + Mn * Mn);
  tc.low_gamma = gamma <= 1.0 + 2.0 / n;
  tc.k = tc.low_gamma ? 1.0 : gn - 1.0;
  tc.L1 = tc.L / tc.k;
  tc.L2 = tc.L;
  return tc;
}

CriterionReport theorem21_check(const MomentSet& ms0, const CheminConstant& cc, double gamma, int n) {
  require_positive_energy(ms0);
  const ThresholdConstants tc = threshold_constants(ms0, cc, gamma, n);
  const double seg = 2.0 * std::sqrt(ms0.E * ms0.G);
  const double F0 = ms0.F;

  double rhs;
  if (tc.L == 0.0) {
    rhs = tc.k * seg;
  } else {
    rhs = tc.L2 * guarded_cot(tc.L1 / seg);
  }
  CriterionReport r = make_report(Tag::T2_1, F0 >= rhs, F0, rhs);
  r.inputs = {{"E", ms0.E}, {"G", ms0.G}, {"M_norm", ms0.M_norm()}, {"C", cc.C},
              {"L", tc.L}, {"L1", tc.L1}, {"L2", tc.L2}};
  if (tc.L == 0.0) r.notes = "L = 0, right side replaced by its limit";

  if (r.satisfied && F0 > 0.0) {
    // q = (2 sqrt(EG)/L2)(pi/2 - arctan(F0/L1)); atan2 keeps the L -> 0 limit.
    const double q = tc.L == 0.0 ? seg / (tc.k * F0) : seg / tc.L2 * std::atan2(tc.L1, F0);
    if (1.0 - q > 0.0) {
      r.t_star = std::sqrt(ms0.G / ms0.E) * q / (1.0 - q);
    } else if (!r.notes.empty()) {
      r.notes += "; lifetime bound undefined";
    } else {
      r.notes = "lifetime bound undefined";
    }
  }
  return r;
}

double necessary_f(double z, double z1) {
  if (z == 0.0) return kPi / 2.0 - 1.0 / z1;
  return std::atan(1.0 / z) - 1.0 / std::hypot(z, z1);
}

DiagnosticsReport necessary_diagnostics(const MomentSet& ms0, const CheminConstant& cc,
                                        double gamma, int n) {
  DiagnosticsReport d;
  if (!(ms0.Ep > 0.0)) {
    d.skipped = true;
    d.note = "pressureless data, diagnostics skipped";
    return d;
  }
  if (!(ms0.G > 0.0) || !(ms0.E > 0.0)) {
    d.skipped = true;
    d.note = "degenerate data, diagnostics skipped";
    return d;
  }
  const ThresholdConstants tc = threshold_constants(ms0, cc, gamma, n);
  const double EG = ms0.E * ms0.G;
  d.ek_over_ep = ms0.Ek / ms0.Ep;
  d.kinetic_dominance = d.ek_over_ep >= kPi * kPi / 4.0;
  d.ek_over_e = ms0.Ek / ms0.E;
  d.kinetic_share = d.ek_over_e >= 1.0 / std::tan(1.0);
  d.divergence_threshold = 2.0 * std::sqrt(EG) / std::tan(1.0);
  d.large_divergence = ms0.F >= d.divergence_threshold;
  if (!(tc.L > 0.0)) {
    d.note = "L = 0, z undefined";
    return d;
  }
  d.z = 2.0 * std::sqrt(ms0.Ek * ms0.G) / tc.L;
  d.z1 = 2.0 * std::sqrt(ms0.Ep * ms0.G) / tc.L;
  d.f_z = necessary_f(d.z, d.z1);
  d.f_zero = necessary_f(0.0, d.z1);
  // f ~ (z1^2/2 - 1/3) / z^3 at large z, so a log-spaced sweep to 1e4 settles the sign.
  d.f_min = d.f_zero;
  d.f_min_at = 0.0;
  const double zmax = std::max(1e4, 10.0 * d.z);
  constexpr int kSamples = 4000;
  for (int i = 0; i <= kSamples; ++i) {
    const double z = 1e-4 * std::pow(zmax / 1e-4, static_cast<double>(i) / kSamples);
    const double f = necessary_f(z, d.z1);
    if (f < d.f_min) {
      d.f_min = f;
      d.f_min_at = z;
    }
  }
  d.unreachable = ms0.M_norm() == 0.0 && d.f_min > 0.0;
  if (d.unreachable) d.note = "blow-up condition unreachable";
  return d;
}

SiderisSetup SiderisSetup::make(int n, double alpha, double C_prop, double R0, double rho_max,
                                double eta0, double M_norm, double F0) {
  SiderisSetup s;
  s.alpha = alpha;
  s.C_prop = C_prop;
  s.R0 = R0;
  s.rho_max = rho_max;
  s.eta0 = eta0;
  s.M_norm = M_norm;
  s.F0 = F0;
  s.A = rho_max * unit_ball_volume(n) * std::pow(C_prop, 2.0 + n);
  if (!(s.A > 0.0)) throw Error(ErrorKind::InvalidArgument, "A must be positive");
  return s;
}

double perturbation_eta(const FluidState& state, double gamma, double rho_bar, double S_bar) {
  const double bg = rho_bar * std::exp(S_bar / gamma);
  const double vol = state.grid.cell_volume();
  double eta = 0.0;
  for (std::size_t c = 0; c < state.size(); ++c) {
    eta += (std::pow(state.pres[c], 1.0 / gamma) - bg) * vol;
  }
  return eta;
}

std::vector<CriterionReport> sideris_check(const SiderisSetup& s, int n) {
  if (s.eta0 < 0.0) throw Error(ErrorKind::EtaNegative, "eta(0) must be non-negative");
  if (!(s.A > 0.0)) throw Error(ErrorKind::InvalidArgument, "A must be positive");
  const bool slow = s.alpha <= 1.0 / (2.0 + n);
  const double k = s.alpha * (2.0 + n) - 1.0;
  const double kA = k * s.A;
  const double Mn = s.M_norm;
  const std::vector<Input> common{{"alpha", s.alpha}, {"C_prop", s.C_prop}, {"R0", s.R0},
                                  {"rho_max", s.rho_max}, {"eta0", s.eta0}, {"A", s.A},
                                  {"M_norm", Mn}, {"F0", s.F0}};
  const char* kSlowOnly = "requires alpha <= 1/(2+n)";
  const char* kFastOnly = "requires alpha > 1/(2+n)";

  std::vector<CriterionReport> out;
  {
    auto r = make_report(Tag::T3_1a, slow && Mn == 0.0 && s.F0 > 0.0, s.F0, 0.0);
    if (!slow) r.notes = kSlowOnly;
    else if (Mn != 0.0) r.notes = "requires |M| = 0";
    out.push_back(r);
  }
  {
    auto r = make_report(Tag::T3_1b, slow && Mn != 0.0, Mn, 0.0);
    if (!slow) r.notes = kSlowOnly;
    out.push_back(r);
  }
  {
    auto r = make_report(Tag::T3_1c, !slow && s.F0 > kA, s.F0, kA);
    if (slow) r.notes = kFastOnly;
    out.push_back(r);
  }
  {
    const double bound = kPi * kA;
    const double rhs = Mn == 0.0 ? kA : Mn * guarded_cot(Mn / kA);
    auto r = make_report(Tag::T3_1d, !slow && s.F0 > rhs && Mn >= bound, s.F0, rhs);
    if (slow) r.notes = kFastOnly;
    else if (Mn < bound) r.notes = "requires |M| >= pi (alpha(2+n)-1) A";
    r.inputs.push_back({"M_bound", bound});
    out.push_back(r);
  }
  {
    const double bound = kPi * kA;
    auto r = make_report(Tag::T3_1e, !slow && Mn >= bound, Mn, bound);
    if (slow) r.notes = kFastOnly;
    out.push_back(r);
  }
  for (auto& r : out) r.inputs.insert(r.inputs.begin(), common.begin(), common.end());
  return out;
}

double damping_psi(const MomentSet& ms0, double L, int n, double mu0, double t) {
  if (!(L > 0.0)) throw Error(ErrorKind::DegenerateData, "Psi needs L > 0");
  const double sE = std::sqrt(ms0.E);
  const double sG = std::sqrt(ms0.G);
  const double X = sE * t + sG;
  const double Y = sE * t + 2.0 * sG;
  const double Mn = ms0.M_norm();
  const double s = 4.0 * mu0 * sE * X * X * X + n * ms0.E * mu0 * mu0 * t * t * Y * Y +
                   2.0 * mu0 * std::sqrt(static_cast<double>(n)) * Mn * sE * t * Y;
  return 1.0 - s / (L * L);
}

CriterionReport damped_check(const MomentSet& ms0, const CheminConstant& cc, double gamma, int n,
                             double mu0, double psi_star) {
  if (!(psi_star > 0.0) || !(psi_star < 1.0)) {
    throw Error(ErrorKind::PsiStarOutOfRange, "psi_star must lie in (0, 1)");
  }
  if (mu0 < 0.0) throw Error(ErrorKind::InvalidArgument, "mu0 must be non-negative");
  require_positive_energy(ms0);
  const ThresholdConstants tc = threshold_constants(ms0, cc, gamma, n);
  const double F0 = ms0.F;
  const double seg = 2.0 * std::sqrt(ms0.E * ms0.G);

  CriterionReport r;
  r.tag = Tag::T4_1;
  r.lhs = F0;
  r.inputs = {{"E", ms0.E}, {"G", ms0.G}, {"M_norm", ms0.M_norm()}, {"C", cc.C},
              {"L", tc.L}, {"mu0", mu0}, {"psi_star", psi_star}};
  if (!(tc.L > 0.0)) {
    r.rhs = kInf;
    r.margin = -kInf;
    r.notes = "L = 0, damping estimate undefined";
    return r;
  }
  const double Ls = tc.L * psi_star;
  r.rhs = Ls * guarded_cot(Ls / (tc.k * seg));
  r.margin = r.lhs - r.rhs;
  const bool threshold = F0 >= r.rhs;

  double T = kInf;
  if (mu0 > 0.0) {
    const double target = psi_star * psi_star;
    if (damping_psi(ms0, tc.L, n, mu0, 0.0) <= target) {
      T = 0.0;
    } else {
      T = first_time([&](double t) { return damping_psi(ms0, tc.L, n, mu0, t) <= target; });
    }
  }
  r.inputs.push_back({"T_mu0", T});

  // Comparison ODE: arctan(F/Ls) grows by (Ls/(2k sqrt(EG)))(1 - (sqrt G/(sqrt E t + sqrt G))^k).
  const double sE = std::sqrt(ms0.E), sG = std::sqrt(ms0.G);
  const double base = std::atan(F0 / Ls);
  const double gain = Ls / (tc.k * seg);
  auto reached = [&](double t) {
    return base + gain * (1.0 - std::pow(sG / (sE * t + sG), tc.k)) >= kPi / 2.0;
  };
  double t_star = kInf;
  if (threshold) t_star = first_time(reached);
  if (!threshold) {
    r.notes = "threshold not met";
  } else if (std::isinf(t_star)) {
    r.notes = "NoRoot: comparison equation has no positive solution";
  } else {
    r.t_star = t_star;
    if (!(T > t_star)) r.notes = "damping horizon T(mu0) does not exceed t*";
  }
  r.satisfied = threshold && r.t_star.has_value() && T > *r.t_star;
  return r;
}

RotationResult rotation_check(const MomentSet& ms0, const CheminConstant& cc, double gamma, double l) {
  if (ms0.dim != 2 || !ms0.F_perp) {
    throw Error(ErrorKind::InvalidArgument, "rotation criterion needs 2D moments with F_perp");
  }
  if (l == 0.0) throw Error(ErrorKind::InvalidArgument, "rotation criterion needs l != 0");
  if (!(gamma > 1.0)) throw Error(ErrorKind::DomainError, "gamma must exceed 1");
  if (!(ms0.E > 0.0)) throw Error(ErrorKind::DegenerateData, "rotation criterion needs E(0) > 0");
  constexpr int n = 2;
  RotationBounds b;
  b.l = l;
  b.script_M = l * ms0.G + *ms0.F_perp;
  b.Theta2_0 = 2.0 * ms0.E + l * b.script_M;
  if (b.Theta2_0 < 0.0) throw Error(ErrorKind::ThetaNegative, "Theta_2(0) is negative");
  b.G_minus = std::pow(cc.C / ms0.E, 1.0 / (gamma - 1.0));
  const double root = std::sqrt(b.Theta2_0) + std::sqrt(2.0 * ms0.E);
  b.G_plus = root * root / (l * l);
  const double expo = 1.0 - 0.5 * (gamma - 1.0) * n;
  if (cc.C == 0.0) {
    b.delta = 0.0;
  } else {
    b.delta = cc.C * std::pow(gamma <= 1.0 + 2.0 / n ? b.G_minus : b.G_plus, expo);
  }
  b.K_script = b.script_M * b.script_M - l * l * b.G_plus * b.G_plus + b.delta;

  const double K = b.K_script;
  const double F0 = ms0.F;
  const std::vector<Input> inputs{{"l", l}, {"script_M", b.script_M}, {"Theta2_0", b.Theta2_0},
                                  {"G_minus", b.G_minus}, {"G_plus", b.G_plus},
                                  {"delta", b.delta}, {"K", K}, {"C", cc.C}};

  RotationResult res;
  res.bounds = b;
  res.cond53 = make_report(Tag::T5_1_53, K > 0.0, K, 0.0);
  res.cond53.inputs = inputs;
  if (K > 0.0) {
    const double sk = std::sqrt(K);
    res.cond53.t_star = 2.0 * b.G_plus / sk * std::atan2(sk, F0);
  }

  if (K > 0.0) {
    res.cond54 = make_report(Tag::T5_1_54, false, F0, kInf);
    res.cond54.notes = "requires K <= 0";
  } else {
    const double k = std::sqrt(-K);
    res.cond54 = make_report(Tag::T5_1_54, F0 > k, F0, k);
    if (F0 > k) {
      res.cond54.t_star = k == 0.0 ? 2.0 * b.G_plus / F0 : b.G_plus / k * std::log((F0 + k) / (F0 - k));
    }
  }
  res.cond54.inputs = inputs;
  return res;
}

PointwiseRotation pressureless_rotation_pointwise(const Grid& grid,
                                                  const std::vector<std::vector<double>>& v0,
                                                  double l) {
  if (grid.dim() != 2) throw Error(ErrorKind::InvalidArgument, "pointwise rotation check is 2D only");
  if (v0.size() != 2 || v0[0].size() != grid.size() || v0[1].size() != grid.size()) {
    throw Error(ErrorKind::NonconformingArrays, "velocity does not conform to the grid");
  }
  if (l == 0.0) throw Error(ErrorKind::InvalidArgument, "pointwise rotation check needs l != 0");

  auto deriv = [&](const std::vector<double>& f, std::size_t c, const Index& idx, int a) {
    const std::size_t st = grid.stride(a);
    const double h = grid.spacing(a);
    const int i = idx[a], N = grid.cells(a);
    if (i == 0) return (f[c + st] - f[c]) / h;
    if (i == N - 1) return (f[c] - f[c - st]) / h;
    return (f[c + st] - f[c - st]) / (2.0 * h);
  };

  PointwiseRotation out;
  out.holds.assign(grid.size(), 1);
  out.max_lhs = -kInf;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Index idx = grid.unflatten(c);
    const double j11 = deriv(v0[0], c, idx, 0);
    const double j12 = deriv(v0[0], c, idx, 1);
    const double j21 = deriv(v0[1], c, idx, 0);
    const double j22 = deriv(v0[1], c, idx, 1);
    const double omega = j21 - j12;
    const double tr = j11 + j22;
    const double eta2 = tr * tr - 4.0 * (j11 * j22 - j12 * j21);
    const double lhs = 2.0 * l * omega + eta2;
    out.max_lhs = std::max(out.max_lhs, lhs);
    if (!(lhs < l * l)) {
      out.holds[c] = 0;
      out.globally_smooth = false;
    }
  }
  out.report = make_report(Tag::R5_1, !out.globally_smooth, out.max_lhs, l * l);
  out.report.inputs = {{"l", l}};
  out.report.notes = out.globally_smooth ? "smooth for all time" : "some cell violates 2 l omega0 + eta0^2 < l^2";
  return out;
}

}  // namespace blowup::criteria
