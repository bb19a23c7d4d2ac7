#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blowup/fluid_state.hpp"
#include "blowup/gas_model.hpp"

namespace blowup {

/// Scalar integral diagnostics of one snapshot. All integrals are over the
/// grid box by the midpoint rule.
struct MomentSet {
  double t = 0.0;
  int dim = 0;
  double m = 0.0;                  // mass
  double G = 0.0;                  // (1/2) int rho |x|^2
  double F = 0.0;                  // int (V, x) rho
  std::optional<double> F_perp;    // int (V_perp, x) rho, n = 2 only
  std::vector<double> M;           // angular momenta, C(n,2) entries
  double Ek = 0.0;
  double Ep = 0.0;
  double E = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;                 // n (gamma - 1) Ep
  double I3_direct = 0.0;          // n int P
  double tail = 0.0;               // int of rho |x|^2 over the two outermost cell shells

  double M_norm() const;
};

struct QuadratureOptions {
  /// TailTooLarge is raised when tail > tail_tolerance * G.
  double tail_tolerance = 1e-8;
  bool enforce_tail = true;
};

/// Midpoint-rule evaluation of every MomentSet field.
///
/// Angular momenta follow M_k = int (V_j x_i - V_i x_j) rho, i > j, with pairs
/// ordered (2,1), (3,1), (3,2) (1-based), so that in 2D M_1 = int (V, x_perp) rho
/// with x_perp = (x_2, -x_1). The cell-wise sigma used for I2 is the same pair
/// with opposite sign; only |sigma|^2 enters.
MomentSet compute_moments(const FluidState& state, const GasModel& model,
                          const QuadratureOptions& opts = {});

struct HolderCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

/// The four Cauchy-Schwarz/Hoelder inequalities between F, |M|, G, Ek, I1, I2:
///   F^2 <= 4 G Ek,  F^2 <= 2 G I1,  |M|^2 <= 4 G Ek,  |M|^2 <= 2 G I2.
/// lhs <= rhs (1 + rel_slack) + abs_slack counts as satisfied; G = 0 is vacuous.
std::vector<HolderCheck> holder_check(const MomentSet& ms, double rel_slack = 1e-12,
                                      double abs_slack = 1e-300);

/// Radial weight phi(|x|) with its first two derivatives for the generic
/// functionals G_phi, G'_phi and I_{k,phi}.
struct RadialWeight {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> d2phi;

  static RadialWeight half_square();  // phi = |x|^2 / 2
};

struct WeightedMoments {
  double G = 0.0;
  double dG = 0.0;
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
};

WeightedMoments compute_weighted_moments(const FluidState& state, const RadialWeight& w);

// CSV export: one row per MomentSet, columns
// t,m,G,F,F_perp,M1[,M2,M3],Ek,Ep,E,I1,I2,I3,I3_direct,tail
std::string moments_csv_header(int dim);
std::string moments_csv_row(const MomentSet& ms);
void write_moments_csv(const std::string& path, const std::vector<MomentSet>& series);

}  // namespace blowup
