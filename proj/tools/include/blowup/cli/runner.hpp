#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blowup/cli/scenario.hpp"
#include "blowup/criteria.hpp"
#include "blowup/error.hpp"
#include "blowup/moments.hpp"

namespace blowup::cli {

enum class Command { Moments, Criteria, Affine, Vortex, Simulate, Sweep };

struct RunOptions {
  std::string out_dir;
  std::optional<int> grid;  // overrides [grid] cells
  std::uint64_t seed = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Exit code for a library error: configuration problems map to 2, the rest to 3.
int exit_code_for(ErrorKind kind);

/// Every report requested by the scenario's [criteria] tags, in tag order.
/// Free-form blocks (diagnostics, rotation bounds) go to `text` if given.
std::vector<criteria::CriterionReport> evaluate_criteria(const Scenario& s, const FluidState& state0,
                                                         const MomentSet& ms0,
                                                         std::ostream* text = nullptr);

/// Writes t,G,F,E,script_M with script_M = l G + F_perp (empty outside 2D).
void write_series_csv(const std::string& path, const std::vector<MomentSet>& series, double l);

void cmd_moments(const Scenario& s, const RunOptions& opt);
void cmd_criteria(const Scenario& s, const RunOptions& opt);
void cmd_affine(const Scenario& s, const RunOptions& opt);
void cmd_vortex(const Scenario& s, const RunOptions& opt);
/// Initial moments, criteria, the solver run when configured, events and series.
void run_scenario(const Scenario& s, const RunOptions& opt);
/// One run_scenario per [sweep] value in its own subdirectory, plus a merged
/// criteria.csv whose first column is the swept value.
void cmd_sweep(const IniDocument& doc, const std::string& source_path, const RunOptions& opt);

/// Loads the scenario, dispatches, and reports errors on `err`. Returns the exit code.
int run_command(Command cmd, const std::string& scenario_path, const RunOptions& opt,
                std::ostream& err);

}  // namespace blowup::cli
