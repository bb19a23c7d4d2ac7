#pragma once

#include "blowup/fluid_state.hpp"
#include "blowup/gas_model.hpp"

namespace blowup {

/// Max-norm residuals of
///   rho_t + div(rho V) = 0
///   rho (V_t + (V, grad) V) + grad P = -mu rho V + l rho V_perp
///   P_t + (V, grad P) + gamma P div V = 0
/// over the cells that have a full centred stencil.
struct EulerResidual {
  double continuity = 0.0;
  double momentum = 0.0;
  double pressure = 0.0;

  double max() const;
};

/// Time derivatives from the central difference (next - prev) / (2 dt);
/// all three states must share a grid and be equally spaced in time.
/// Viscous forcing is not supported.
EulerResidual euler_residual(const FluidState& prev, const FluidState& mid, const FluidState& next,
                             const GasModel& model);

/// Residual with all time derivatives set to zero.
EulerResidual steady_residual(const FluidState& state, const GasModel& model);

}  // namespace blowup
