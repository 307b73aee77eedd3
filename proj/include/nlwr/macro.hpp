#pragma once

#include "nlwr/diagnostics.hpp"
#include "nlwr/grid.hpp"
#include "nlwr/model.hpp"
#include "nlwr/scenario.hpp"

#include <vector>

namespace nlwr {

/// Cell-averaged density with ghost boundary data.
struct MacroState {
  ArrayXd rho;
  double t = 0.0;
  double left_ghost = 0.0;   // far-field density at the left boundary
  double right_ghost = 0.0;  // equilibrium density rho_bar
};

struct VelocityField {
  ArrayXd v;            // per-cell nonlocal velocity
  double v_left = 0.0;  // ghost velocity for the first flux
};

struct StepInfo {
  double flux_in = 0.0;   // F at the left boundary
  double flux_out = 0.0;  // F at the right boundary
};

VelocityField nonlocal_velocities(const MacroState& state,
                                  const WeightTable& weights,
                                  const VelocityModel& model);

/// Adaptive step from the maximum nonlocal velocity, with a cap
/// dt_max = 10*dx/v(0) for degenerate near-jam states.
double cfl_dt(const ArrayXd& velocities, double dx, double cfl_factor,
              double v_free);

/// Upwind flux-form update; aborts if the updated density leaves (0, rho_max].
MacroState godunov_step(const MacroState& state, const WeightTable& weights,
                        const VelocityModel& model, double dt,
                        StepInfo* info = nullptr);

/// Same update with a precomputed velocity field (one evaluation per step).
MacroState advance(const MacroState& state, const VelocityField& vf, double dx,
                   double rho_max, double dt, StepInfo* info = nullptr);

struct MacroRun {
  GridSpec grid;
  std::vector<Snapshot> snapshots;
  std::vector<DiagnosticsRecord> records;
  double rho_min_init = 0.0;
  double rho_max_init = 0.0;
  double decay_rate = 0.0;  // exponent coefficient of the bound
  double L0 = 0.0;
};

MacroRun run_macro(const ScenarioConfig& config);

}  // namespace nlwr
