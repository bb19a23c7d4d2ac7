#pragma once

#include <string>
#include <vector>

#include "blowup/criteria.hpp"
#include "blowup/fluid_state.hpp"
#include "blowup/moments.hpp"

namespace blowup {

/// Affine-velocity family V = alpha(t) x with the polytropic profile
///   p0   = p_amp (1 + |x|^2)^(-a),
///   rho0 = rho_amp (1 + |x|^2)^(-(a+1)),
/// with p_amp and rho_amp chosen so that G(0) = G0, Ep(0) = Ep0 and the
/// pressure gradient balances the affine acceleration.
struct AffineParams {
  double gamma = 2.0;
  int n = 2;
  double G0 = 1.0;
  double Ep0 = 0.0;
  double alpha0 = 1.0;
  double a = 3.0;

  /// K = Ep0 G0^{(gamma-1)n/2}.
  double K() const;
  double G1_0() const { return 1.0 / G0; }
  void validate() const;
};

struct AffineProfile {
  double rho_amp = 0.0;
  double p_amp = 0.0;
  double mass = 0.0;
  double S0 = 0.0;  // min of log(P / rho^gamma), attained at the origin
};

AffineProfile affine_profile(const AffineParams& p);

/// Exact initial moments of the profile (no quadrature).
MomentSet affine_initial_moments(const AffineParams& p);

/// Samples of the ODE solution
///   G1' = -2 alpha G1,  alpha' = -alpha^2 + (n/2)(gamma-1) K G1^{(gamma-1)n/2 + 1},
/// taken every `stride` RK4 steps of size dt.
struct AffineTrajectory {
  std::vector<double> t;
  std::vector<double> alpha;
  std::vector<double> G1;
  double dt = 0.0;
  int stride = 1;
  double K = 0.0;
  /// max over samples of the Richardson estimate |y_dt - y_{dt/2}| / 15,
  /// relative to max(1, |y|).
  double error_estimate = 0.0;

  double t_end() const { return t.empty() ? 0.0 : t.back(); }
};

AffineTrajectory affine_integrate(const AffineParams& p, double t_end, double dt, int stride = 1);

struct AffinePoint {
  double t = 0.0;
  double alpha = 0.0;
  double G1 = 0.0;
  double G() const { return 1.0 / G1; }
  double F() const { return 2.0 * alpha / G1; }
  double Ek() const { return alpha * alpha / G1; }
};

/// Trajectory value at any t in [0, t_end]: one partial RK4 step from the
/// nearest sample at or below t. OutOfRange outside the trajectory.
AffinePoint affine_at(const AffineTrajectory& traj, const AffineParams& p, double t);

/// Potential energy along the trajectory, K / G^{(gamma-1)n/2}.
double affine_Ep(const AffineParams& p, const AffinePoint& pt);

/// Fields at time t:
///   V = alpha x,  rho = e^{-nA} rho0(x e^{-A}),  P = e^{-n gamma A} p0(x e^{-A}),
/// with e^{-A} = sqrt(G0 G1(t)).
FluidState affine_fields(const AffineTrajectory& traj, const AffineParams& p, double t,
                         const Grid& grid);

/// Initial fields without a trajectory.
FluidState affine_initial_fields(const AffineParams& p, const Grid& grid);

/// max over interior cells of |grad p0 + (n/2)(gamma-1) G1(0) Ep0 rho0 x| with
/// centred differences.
double compatibility_check(const FluidState& state0, double G1_0, double Ep0, double gamma);

struct ThresholdSearchResult {
  double alpha0 = 0.0;
  double F0 = 0.0;
  double rhs_blowup = 0.0;      // L2 cot(L1 / (2 sqrt(E G)))
  double gap_blowup = 0.0;      // rhs_blowup - F0; positive when the blow-up condition fails
  double rhs_relaxed = 0.0;     // L1 cot(L2 / (2 sqrt(E G))) - epsilon
  double margin_relaxed = 0.0;  // F0 - rhs_relaxed
  bool blowup_condition_fails = false;
  double z = 0.0;
  double lambda = 0.0;
  criteria::CheminConstant chemin;
};

/// Smallest alpha0 (to relative precision 1e-9) on a doubling-then-bisection
/// path such that F(0) > L1 cot(L2/(2 sqrt(EG))) - epsilon. SearchFailed past 1e12.
ThresholdSearchResult theorem22_search(const AffineParams& p, double epsilon);

/// Threshold quantities at a fixed alpha0.
ThresholdSearchResult theorem22_evaluate(const AffineParams& p, double alpha0, double epsilon);

/// CSV with columns t,alpha,G1,G,F,Ep.
void write_trajectory_csv(const std::string& path, const AffineTrajectory& traj,
                          const AffineParams& p);

}  // namespace blowup
