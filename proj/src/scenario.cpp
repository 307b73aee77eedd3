#include "nlwr/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace nlwr {

GridSpec ScenarioConfig::make_grid() const {
  double eta = kernel.eta();
  double xr = x_right.value_or(b + vbar * t_end + 2.0 * eta);
  double xl = x_left.value_or(b - model.v0() * t_end - 2.0 * eta);
  if (!(xr > xl)) throw std::invalid_argument("empty spatial domain");
  auto n = static_cast<Index>(std::ceil((xr - xl) / dx - 1e-9));
  GridSpec g;
  g.dx = dx;
  g.n_cells = n;
  g.x_left = xr - n * dx;  // keep the right edge (and b-aligned breaks) exact
  return g;
}

void ScenarioConfig::validate() const {
  if (dx <= 0.0) throw std::invalid_argument("grid.dx must be positive");
  if (dx > kernel.eta())
    throw std::invalid_argument("grid.dx exceeds the nonlocal reach");
  if (t_end <= 0.0) throw std::invalid_argument("grid.t_end must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw std::invalid_argument("grid.cfl must lie in (0, 1]");
  if (cadence <= 0.0) throw std::invalid_argument("output.cadence must be positive");
  if (vbar < 0.0) throw std::invalid_argument("vbar must be nonnegative");
  if (vbar >= model.v0())
    throw std::invalid_argument(
        "vbar must be strictly below v(0): the leading-vehicle control "
        "cannot stabilize at free-flow speed");
  initial.validate();
  double rb = rho_bar();
  for (const auto& s : initial.segments) {
    if (!(s.value > 0.0) || s.value > model.rho_max() * (1.0 + 1e-12))
      throw std::invalid_argument(
          "initial profile values must lie in (0, rho_max]");
  }
  // far-field control condition: rho_0 = rho_bar ahead of b
  for (const auto& s : initial.segments) {
    if (s.x_upper > b + 1e-12 && std::abs(s.value - rb) > 1e-12)
      throw std::invalid_argument(
          "initial profile must equal the equilibrium density ahead of the "
          "control start b");
  }
  if (micro && micro_h > kernel.eta())
    throw std::invalid_argument(
        "vehicle mass h exceeds the nonlocal reach: stencil under-resolved");
}

}  // namespace nlwr
