#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blowup/affine.hpp"
#include "blowup/cli/ini.hpp"
#include "blowup/gas_model.hpp"
#include "blowup/solver.hpp"
#include "blowup/vortex.hpp"

namespace blowup::cli {

struct GaussianAffineInit {
  double alpha0 = 1.0;
  double a = 3.0;
  double Ep0 = 0.5;
  double G0 = 1.0;
};

struct VortexInit {
  VortexParams params;
};

/// rho = amplitude exp(-|x|^2 / width^2) + background, P = kappa rho^gamma,
/// V = alpha x taper(x) ("radial"), alpha x_perp taper(x) ("rotation") or a
/// mix of both ("spiral"), taper = exp(-|x|^2 / (2 taper_width^2)) or 1.
struct GaussianInit {
  double amplitude = 1.0;
  double width = 1.0;
  double kappa = 1.0;
  double background = 0.0;
  std::string velocity = "radial";
  double alpha = 1.0;
  double swirl = 0.0;
  double taper_width = 0.0;
  std::vector<double> center{0.0, 0.0, 0.0};
};

struct FileInit {
  std::string path;
};

/// rho = rho_bar (1 + amplitude b(r)), P = e^{S_bar} rho^gamma, with the
/// compact bump b = (1 - r^2/radius^2)^4 and V = b (velocity x + swirl x_perp)/radius.
struct CompactPerturbationInit {
  double rho_bar = 1.0;
  double S_bar = 0.0;
  double amplitude = 0.5;
  double radius = 1.0;
  double velocity = 0.5;
  double swirl = 0.0;
};

using InitialSpec = std::variant<GaussianAffineInit, VortexInit, GaussianInit, FileInit, CompactPerturbationInit>;

struct CriteriaSpec {
  std::vector<std::string> tags;  // T2.1, diagnostics, T3.1, T4.1, T5.1, R5.1
  double alpha = 1.0;
  std::optional<double> C_prop;
  double mu0 = 0.0;
  double psi_star = 0.9;
  std::optional<double> l;
};

struct AffineRunSpec {
  double t_end = 1.0;
  double dt = 1e-3;
  int stride = 10;
  std::optional<double> epsilon;
};

struct SweepSpec {
  std::string section;
  std::string key;
  std::vector<std::string> values;
};

struct Scenario {
  std::string name;
  std::string source_path;
  GasModel model;
  int cells = 128;
  double half_width = 6.0;
  InitialSpec initial;
  double noise = 0.0;  // relative velocity noise driven by --seed
  QuadratureOptions quadrature;
  CriteriaSpec criteria;
  std::optional<SolverConfig> solver;
  AffineRunSpec affine;
  std::optional<SweepSpec> sweep;
};

/// Builds a Scenario from a parsed document. Unknown keys, bad values and
/// missing referenced files raise Parse errors carrying the line number.
Scenario scenario_from_ini(const IniDocument& doc, const std::string& source_path = "");
Scenario load_scenario(const std::string& path);

/// Initial state on the scenario grid. `seed` drives the optional noise.
FluidState build_initial_state(const Scenario& s, std::uint64_t seed = 0);

/// Background (rho_bar, S_bar) for compact-perturbation data, if any.
std::optional<std::pair<double, double>> background_state(const Scenario& s);

}  // namespace blowup::cli
