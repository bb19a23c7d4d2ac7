#include "blowup/gas_model.hpp"

#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

namespace {

template <class T>
const T* find_term(const std::vector<ForceTerm>& terms) {
  for (const auto& term : terms) {
    if (const auto* p = std::get_if<T>(&term)) return p;
  }
  return nullptr;
}

}  // namespace

const Friction* ForceSpec::friction() const { return find_term<Friction>(terms); }
const Coriolis* ForceSpec::coriolis() const { return find_term<Coriolis>(terms); }
const Viscosity* ForceSpec::viscosity() const { return find_term<Viscosity>(terms); }

void GasModel::validate() const {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::DomainError, "adiabatic exponent must exceed 1");
  }
  if (dim < 1 || dim > 3) throw Error(ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
  if (const auto* f = force.friction(); f && !(f->mu0 >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "friction bound mu0 must be non-negative");
  }
  if (force.coriolis() && dim != 2) {
    throw Error(ErrorKind::InvalidArgument, "Coriolis force is only defined for n = 2");
  }
  if (const auto* v = force.viscosity()) {
    if (!(v->mu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "viscosity mu must be >= 0");
    if (v->lambda + 2.0 * v->mu / dim < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "viscosity requires lambda + 2 mu / n >= 0");
    }
  }
}

void GasModel::validate(const Grid& grid, double t) const {
  validate();
  if (grid.dim() != dim) throw Error(ErrorKind::InvalidArgument, "model and grid dimension differ");
  if (const auto* f = force.friction(); f && f->mu) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(f->mu(t, grid.center(i))) > f->mu0) {
        throw Error(ErrorKind::InvalidArgument, "friction coefficient exceeds its bound mu0");
      }
    }
  }
}

}  // namespace blowup
