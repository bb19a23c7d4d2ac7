#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "blowup/grid.hpp"

namespace blowup {

/// Friction force -mu(t,x) rho V with |mu| <= mu0.
struct Friction {
  double mu0 = 0.0;
  std::function<double(double, const Point&)> mu;  // empty means mu == mu0

  double at(double t, const Point& x) const { return mu ? mu(t, x) : mu0; }
};

/// Coriolis force l rho V_perp with V_perp = (V_2, -V_1); constant l, n = 2 only.
struct Coriolis {
  double l = 0.0;
};

/// Newtonian stress T_ij = mu (d_i V_j + d_j V_i) + lambda div V delta_ij.
struct Viscosity {
  double mu = 0.0;
  double lambda = 0.0;
};

using ForceTerm = std::variant<Friction, Coriolis, Viscosity>;

/// Composite force: an empty list is the force-free case.
struct ForceSpec {
  std::vector<ForceTerm> terms;

  bool force_free() const { return terms.empty(); }
  const Friction* friction() const;
  const Coriolis* coriolis() const;
  const Viscosity* viscosity() const;
};

struct GasModel {
  double gamma = 1.4;
  int dim = 2;
  ForceSpec force;

  /// gamma > 1, 1 <= dim <= 3, viscosity lambda + 2 mu / n >= 0, mu >= 0,
  /// Coriolis only in 2D, mu0 >= 0.
  void validate() const;

  /// Additionally checks mu0 >= sup over the grid of |mu(t, x)|.
  void validate(const Grid& grid, double t) const;
};

}  // namespace blowup
