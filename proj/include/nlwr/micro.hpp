#pragma once

#include "nlwr/diagnostics.hpp"
#include "nlwr/grid.hpp"
#include "nlwr/model.hpp"
#include "nlwr/scenario.hpp"

#include <vector>

namespace nlwr {

/// Follow-the-leader state: ordered positions, the last entry is the leader
/// moving at the prescribed speed vbar.
struct MicroState {
  ArrayXd x;  // strictly increasing
  double h = 0.01;  // vehicle mass
  double t = 0.0;
  double vbar = 0.5;
  double b = 0.0;

  Index size() const { return x.size(); }
  double leader() const { return x[x.size() - 1]; }
};

/// Leader at b, followers placed leftward so the mass between consecutive
/// vehicles equals h under the initial profile; covers down to x_left.
MicroState micro_init(const PiecewiseConstant& profile, double h, double b,
                      double x_left, double eta, double vbar);

/// Speeds from the piecewise-constant density reconstruction ahead of each
/// vehicle (rho_bar ahead of the leader); leader speed is vbar by prescription.
ArrayXd micro_velocities(const MicroState& state, const Kernel& kernel,
                         const VelocityModel& model, double rhobar);

/// Explicit Euler step; the leader is advanced analytically. Throws if the
/// ordering would break (caller halves dt and retries).
MicroState micro_step(const MicroState& state, const Kernel& kernel,
                      const VelocityModel& model, double rhobar, double dt);

/// Discrete window Lyapunov value: sum over vehicles with x_i in
/// [beta-eta, beta) of (V_i - vbar)^2 * (x_{i+1} - x_i).
double micro_lyapunov(const MicroState& state, const Kernel& kernel,
                      const VelocityModel& model, const WindowParams& params,
                      double rhobar);
double micro_lyapunov(const MicroState& state, const ArrayXd& velocities,
                      const WindowParams& params);

struct MicroWindowInfo {
  double t = 0.0;
  Index first = -1;  // lowest vehicle index inside the window, -1 if empty
  Index last = -1;
};

struct TrajectorySample {
  double t;
  Index i;
  double x;
  double v;
};

struct MicroRun {
  std::vector<DiagnosticsRecord> records;
  std::vector<MicroWindowInfo> window_info;
  std::vector<TrajectorySample> trajectory;  // only when requested
  MicroState final_state;
  double rho_min_init = 0.0;
  double decay_rate = 0.0;
  double L0 = 0.0;
};

MicroRun run_micro(const ScenarioConfig& config);

/// Default left coverage bound: mass 2*rho_max*eta of the initial profile
/// behind the leader (everything that can ever enter the window).
double micro_default_coverage_left(const ScenarioConfig& config);

struct JumpAnalysis {
  int n_jumps = 0;
  int n_attributed = 0;  // jumps with a window-edge crossing within one interval
};

/// Flags output intervals whose Lyapunov change dwarfs the neighbouring slope
/// and attributes them to vehicles crossing the window edges.
JumpAnalysis detect_jumps(const std::vector<DiagnosticsRecord>& records,
                          const std::vector<MicroWindowInfo>& window_info);

}  // namespace nlwr
