#pragma once

#include "nlwr/grid.hpp"
#include "nlwr/model.hpp"

#include <optional>
#include <string>

namespace nlwr {

/// Fully resolved simulation setup; validate() enforces the model, kernel and
/// initial-data admissibility conditions.
struct ScenarioConfig {
  std::string id = "custom";
  bool micro = false;

  VelocityModel model = VelocityModel::linear();
  Kernel kernel = Kernel::constant(1.0);
  double vbar = 0.5;
  double b = 0.0;  // control start position
  PiecewiseConstant initial;

  double dx = 5e-3;
  double t_end = 20.0;
  double cfl = 1.0;
  std::optional<double> x_left;   // default: b - v(0)*t_end - 2*eta
  std::optional<double> x_right;  // default: b + vbar*t_end + 2*eta

  double cadence = 0.1;  // output interval
  bool snapshots = false;
  bool trajectories = false;
  double micro_h = 0.01;  // vehicle mass for the microscopic companion

  double rho_bar() const { return model.inverse(vbar); }
  double eta() const { return kernel.eta(); }

  GridSpec make_grid() const;
  void validate() const;
};

}  // namespace nlwr
