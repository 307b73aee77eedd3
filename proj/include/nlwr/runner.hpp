#pragma once

#include "nlwr/scenario.hpp"

#include <string>
#include <vector>

namespace nlwr {

/// One executed scenario with its artifact list; mirrored to manifest.json.
struct RunResult {
  std::string scenario_id;
  std::string out_dir;
  int status = 0;  // 0 ok, 1 validation error, 2 runtime/solver error
  std::string error;
  double wall_time_s = 0.0;
  std::vector<std::string> artifacts;

  double rho_min_init = 0.0;
  double rho_max_init = 0.0;
  double L0 = 0.0;
  double decay_rate = 0.0;
  int micro_jumps = -1;
  int micro_attributed = -1;
};

/// Runs a scenario and writes diagnostics.csv, lyapunov_raw.csv, the resolved
/// config, optional snapshots/trajectories, and manifest.json into out_dir.
/// Solver failures are captured in the result, not thrown.
RunResult run_to_dir(const ScenarioConfig& config, const std::string& out_dir);

struct CheckReport {
  bool found = false;
  std::string scenario_id;
  bool bound_is_hard = false;  // constant-kernel macro run: dominance is hard
  bool bound_ok = true;
  double worst_bound_excess = 0.0;  // max of L/L_bound - 1
  bool max_principle_ok = true;
  double worst_undershoot = 0.0;
  double worst_overshoot = 0.0;
  bool mass_ok = true;
  double worst_mass_residual = 0.0;
  bool monotone_applicable = false;
  bool monotone_ok = true;
  std::vector<std::string> warnings;

  bool pass() const {
    return found && max_principle_ok && mass_ok &&
           (!bound_is_hard || bound_ok) &&
           (!monotone_applicable || monotone_ok);
  }
};

/// Audits a finished run directory against the stabilization bound, the
/// maximum principle and the conservation budget.
CheckReport check_output_dir(const std::string& dir);

}  // namespace nlwr
