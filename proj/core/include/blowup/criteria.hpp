#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blowup/fluid_state.hpp"
#include "blowup/moments.hpp"

namespace blowup::criteria {

/// Cotangent arguments are clamped into [kCotGuard, pi - kCotGuard] so that
/// every threshold stays finite.
inline constexpr double kCotGuard = 1e-9;
double guarded_cot(double x);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Lower-bound constant for the potential energy, Ep >= C / G^{(gamma-1)n/2},
/// evaluated by the closed form
///   C_{g,n} = b^{n(g-1)/d} + b^{-2g/d},  b = 2g/(n(g-1)),  d = (n+2)g - n,
///   C       = e^{S0}/(g-1) (m / C_{g,n})^{(g(n+2)-n)/2}.
/// NOTE: the closed form over-estimates the best constant (on isentropic
/// Gaussians C exceeds Ep G^{(g-1)n/2} by 7%..500%), so it is not a strict
/// lower bound; it is reproduced exactly because every criterion is stated in
/// terms of it.
struct CheminConstant {
  double C = 0.0;
  double C_gamma_n = 0.0;
  double m = 0.0;
  double S0 = 0.0;
  double gamma = 0.0;
  int n = 0;
  bool degenerate = false;  // m == 0 or vacuum-only state
};

CheminConstant chemin_constant(double gamma, int n, double m, double S0);

/// m from `ms`, S0 = min over non-vacuum cells of log(P / rho^gamma). A state
/// with P == 0 everywhere gives the pressureless constant C = 0.
CheminConstant chemin_constant(const FluidState& state, const MomentSet& ms, double gamma);

enum class Tag { T2_1, T3_1a, T3_1b, T3_1c, T3_1d, T3_1e, T4_1, T5_1_53, T5_1_54, R5_1 };
std::string_view tag_name(Tag tag);

struct Input {
  std::string name;
  double value = 0.0;
};

struct CriterionReport {
  Tag tag = Tag::T2_1;
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  std::optional<double> t_star;
  std::vector<Input> inputs;
  std::string notes;
};

/// L, L1, L2 of the force-free criterion.
struct ThresholdConstants {
  double L = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  bool low_gamma = true;  // gamma <= 1 + 2/n
  double k = 1.0;         // (gamma-1)n - 1 in the high-gamma branch, 1 otherwise
};

ThresholdConstants threshold_constants(const MomentSet& ms0, const CheminConstant& cc,
                                       double gamma, int n);

/// F(0) >= L2 cot(L1 / (2 sqrt(E(0) G(0)))). For L = 0 the right side is its
/// limit (L2/L1) 2 sqrt(E G). t_star is reported only when the closed-form
/// lifetime bound has a positive denominator.
CriterionReport theorem21_check(const MomentSet& ms0, const CheminConstant& cc, double gamma, int n);

struct DiagnosticsReport {
  bool skipped = false;
  std::string note;
  double z = 0.0;
  double z1 = 0.0;
  double f_z = 0.0;          // f at the data's own z
  double f_zero = 0.0;       // pi/2 - 1/z1
  double f_min = 0.0;        // min of f over a z sweep
  double f_min_at = 0.0;
  bool unreachable = false;  // f > 0 on the whole sweep
  double ek_over_ep = 0.0;
  bool kinetic_dominance = false;  // Ek/Ep >= pi^2/4
  double ek_over_e = 0.0;
  bool kinetic_share = false;      // Ek/E >= cot 1
  double divergence_threshold = 0.0;  // 2 sqrt(E G) / tan 1
  bool large_divergence = false;      // F(0) >= divergence_threshold
};

/// f(z) = arctan(1/z) - 1/sqrt(z^2 + z1^2), f(0) = pi/2 - 1/z1.
double necessary_f(double z, double z1);

DiagnosticsReport necessary_diagnostics(const MomentSet& ms0, const CheminConstant& cc,
                                        double gamma, int n);

/// Inputs of the compact-perturbation criteria with support growth
/// R(t) < C_prop (1 + t)^alpha.
struct SiderisSetup {
  double alpha = 1.0;
  double C_prop = 1.0;
  double R0 = 0.0;
  double rho_max = 0.0;
  double eta0 = 0.0;
  double M_norm = 0.0;
  double F0 = 0.0;
  double A = 0.0;  // rho_max * omega_n * C_prop^(2+n)

  static SiderisSetup make(int n, double alpha, double C_prop, double R0, double rho_max,
                           double eta0, double M_norm, double F0);
};

/// eta = int (rho e^{S/gamma} - rho_bar e^{S_bar/gamma}) = int (P^{1/gamma} - P_bar^{1/gamma}).
double perturbation_eta(const FluidState& state, double gamma, double rho_bar, double S_bar);

/// One report per condition (a)..(e), each evaluated literally.
std::vector<CriterionReport> sideris_check(const SiderisSetup& setup, int n);

/// Psi(mu0, t) of the damped estimate, built from |M(0)|, E(0), G(0) and L.
double damping_psi(const MomentSet& ms0, double L, int n, double mu0, double t);

/// Damped criterion with a fixed Psi* in (0, 1): F(0) >= L2 Psi* cot(L1 Psi* / (2 sqrt(E G)))
/// and T(mu0) > t*, where T(mu0) is the first time Psi = Psi*^2 and t* the blow-up
/// time of the comparison ODE, both found by bisection.
CriterionReport damped_check(const MomentSet& ms0, const CheminConstant& cc, double gamma, int n,
                             double mu0, double psi_star = 0.9);

struct RotationBounds {
  double l = 0.0;
  double script_M = 0.0;  // l G(0) + F_perp(0)
  double Theta2_0 = 0.0;  // 2 E(0) + l script_M
  double G_minus = 0.0;
  double G_plus = 0.0;
  double delta = 0.0;
  double K_script = 0.0;  // script_M^2 - l^2 G_plus^2 + delta
};

struct RotationResult {
  RotationBounds bounds;
  CriterionReport cond53;  // K > 0
  CriterionReport cond54;  // K <= 0 and F(0) > sqrt(-K)
};

/// Rotating (n = 2) criterion. t_star integrates F' >= (F^2 + K) / (2 G_plus):
///   K > 0: (2 G+/sqrt K)(pi/2 - arctan(F0/sqrt K))
///   K = 0: 2 G+ / F0
///   K < 0: (G+/k) ln((F0 + k)/(F0 - k)),  k = sqrt(-K).
RotationResult rotation_check(const MomentSet& ms0, const CheminConstant& cc, double gamma, double l);

struct PointwiseRotation {
  std::vector<char> holds;  // 2 l omega0 + eta0^2 < l^2 per cell
  double max_lhs = 0.0;
  bool globally_smooth = true;
  CriterionReport report;  // satisfied = some cell violates the smoothness condition
};

/// Pressureless rotating criterion from centred-difference velocity Jacobians
/// (one-sided at the boundary). eta0^2 = tr^2 - 4 det may be negative.
PointwiseRotation pressureless_rotation_pointwise(const Grid& grid,
                                                  const std::vector<std::vector<double>>& v0,
                                                  double l);

}  // namespace blowup::criteria
