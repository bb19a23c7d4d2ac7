#include "blowup/fluid_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup {

FluidState::FluidState(Grid g, double time)
    : grid(std::move(g)),
      t(time),
      rho(grid.size(), 0.0),
      vel(static_cast<std::size_t>(grid.dim()), std::vector<double>(grid.size(), 0.0)),
      pres(grid.size(), 0.0) {}

void FluidState::validate() const {
  const std::size_t n = grid.size();
  if (rho.size() != n || pres.size() != n || vel.size() != static_cast<std::size_t>(grid.dim())) {
    throw Error(ErrorKind::NonconformingArrays, "field arrays do not conform to the grid");
  }
  for (const auto& v : vel) {
    if (v.size() != n) throw Error(ErrorKind::NonconformingArrays, "velocity component size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho[i] >= 0.0) || !std::isfinite(rho[i]) || !(pres[i] >= 0.0) || !std::isfinite(pres[i])) {
      std::ostringstream os;
      os << "cell " << i << " has rho=" << rho[i] << " p=" << pres[i];
      throw Error(ErrorKind::InvalidState, os.str());
    }
    for (const auto& v : vel) {
      if (!std::isfinite(v[i])) throw Error(ErrorKind::InvalidState, "non-finite velocity");
    }
  }
}

std::vector<double> FluidState::entropy(double gamma, double floor) const {
  std::vector<double> s(rho.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > floor) s[i] = std::log(pres[i]) - gamma * std::log(rho[i]);
  }
  return s;
}

double FluidState::min_entropy(double gamma, double floor) const {
  double s0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > floor) s0 = std::min(s0, std::log(pres[i]) - gamma * std::log(rho[i]));
  }
  return s0;
}

double FluidState::max_density() const {
  return rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
}

FluidState sample_state(const Grid& grid, double t, const ScalarField& rho,
                        const VectorField& vel, const ScalarField& pres) {
  FluidState s(grid, t);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.center(i);
    s.rho[i] = rho(x);
    s.pres[i] = pres(x);
    const Point v = vel(x);
    for (int a = 0; a < grid.dim(); ++a) s.vel[a][i] = v[a];
  }
  return s;
}

}  // namespace blowup
