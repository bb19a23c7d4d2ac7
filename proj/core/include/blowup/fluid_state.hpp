#pragma once

#include <functional>
#include <vector>

#include "blowup/grid.hpp"

namespace blowup {

/// Densities below this are treated as vacuum when the entropy is needed.
inline constexpr double kVacuumFloor = 1e-30;

/// Gridded snapshot of (rho, V, P) at time t. Cell values are cell averages
/// (equivalently, midpoint samples) in the grid's row-major order.
struct FluidState {
  Grid grid;
  double t = 0.0;
  std::vector<double> rho;
  std::vector<std::vector<double>> vel;  // one array per axis
  std::vector<double> pres;

  explicit FluidState(Grid g, double time = 0.0);

  int dim() const { return grid.dim(); }
  std::size_t size() const { return grid.size(); }

  /// Throws NonconformingArrays if any array does not match the grid and
  /// InvalidState on negative or non-finite density/pressure.
  void validate() const;

  /// S = log(P / rho^gamma) where rho > floor, NaN elsewhere.
  std::vector<double> entropy(double gamma, double floor = kVacuumFloor) const;

  /// Minimum of S over the non-vacuum cells; +inf when every cell is vacuum.
  double min_entropy(double gamma, double floor = kVacuumFloor) const;

  double max_density() const;
};

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// Samples analytic fields at the cell centres.
FluidState sample_state(const Grid& grid, double t, const ScalarField& rho,
                        const VectorField& vel, const ScalarField& pres);

}  // namespace blowup
