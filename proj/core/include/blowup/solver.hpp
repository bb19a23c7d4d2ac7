#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blowup/fluid_state.hpp"
#include "blowup/gas_model.hpp"
#include "blowup/moments.hpp"

namespace blowup {

enum class Scheme {
  LLF1,   // first-order local Lax-Friedrichs, forward Euler
  MUSCL2  // MC-limited primitive reconstruction, SSP-RK2
};

enum class Boundary { Outflow, Periodic };

struct Detector {
  /// Fires when max |grad V| exceeds grad_factor times its reference value.
  /// The reference is max(initial max |grad V|, c_max / R_min), so that a fluid
  /// starting at rest still has a meaningful scale.
  double grad_factor = 100.0;
  /// Cells with rho below this fraction of max rho are ignored by the
  /// gradient and negative-pressure monitors.
  double density_fraction = 1e-3;
  double dt_floor = 1e-10;
};

struct SolverConfig {
  Scheme scheme = Scheme::MUSCL2;
  double cfl = 0.4;
  double t_end = 1.0;
  double snapshot_interval = 0.1;
  Boundary boundary = Boundary::Outflow;
  Detector detector;
  long max_steps = 10'000'000;
  bool keep_snapshots = true;
  QuadratureOptions quadrature{1e-8, false};

  void validate() const;
};

struct BlowupEvent {
  double t = 0.0;
  std::string trigger;  // gradient | dt-floor | negative-pressure | non-finite | max-steps
  Point location{0.0, 0.0, 0.0};
  double value = 0.0;

  std::string describe() const;
};

struct LedgerEntry {
  double t = 0.0;
  double mass_error = 0.0;                 // (m - m0) / m0
  std::optional<std::vector<double>> momentum_error;  // force-free only, relative to int rho |V| at t = 0
};

struct RunResult {
  std::vector<FluidState> snapshots;
  std::vector<MomentSet> moments;
  std::optional<BlowupEvent> event;
  std::vector<LedgerEntry> ledger;
  long steps = 0;
  double reference_gradient = 0.0;
  double max_gradient_ratio = 0.0;  // max over the run of max |grad V| / reference
  double max_step_mass_error = 0.0; // max over steps of |m_{k+1} - m_k| / m0
};

/// Largest stable step for the configured CFL (hyperbolic and, with
/// viscosity, explicit diffusion limits).
double stable_dt(const FluidState& state, const GasModel& model, const SolverConfig& cfg);

/// One Strang-split update: half source, conservative flux update, half source.
/// dt = min(stable_dt, dt_max). Throws NegativePressure or NonFinite.
FluidState step(const FluidState& state, const GasModel& model, const SolverConfig& cfg,
                double dt_max = std::numeric_limits<double>::infinity());

/// Integrates to cfg.t_end or the first detector event. Step errors become
/// events; snapshots land exactly on multiples of the snapshot interval.
RunResult run(const FluidState& state0, const GasModel& model, const SolverConfig& cfg);

/// max over cells with rho > fraction * max rho of the Frobenius norm of grad V.
double max_velocity_gradient(const FluidState& state, double density_fraction, Boundary boundary,
                             Point* where = nullptr);

/// int rho V over the grid.
std::vector<double> total_momentum(const FluidState& state);

/// Writes snapshot_NNNN.bin files, moments.csv, ledger.csv and events.txt
/// (empty when no event fired) into `dir`, creating it if needed.
void write_run_result(const std::string& dir, const RunResult& result, double gamma);

}  // namespace blowup
