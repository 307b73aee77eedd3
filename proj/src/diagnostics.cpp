#include "nlwr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlwr {

Interval window(double t, const WindowParams& params) {
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  double beta = params.b + params.vbar * t;
  return {beta - params.eta, beta};
}

namespace {

void require_covered(const GridSpec& grid, Interval win) {
  if (win.lo < grid.x_left - 1e-9 || win.hi > grid.x_right() + 1e-9)
    throw std::domain_error("window extends outside the computational grid");
}

}  // namespace

double window_l2(const GridSpec& grid, const ArrayXd& f, Interval win,
                 double ref) {
  require_covered(grid, win);
  double acc = 0.0;
  auto j0 = static_cast<Index>(std::floor((win.lo - grid.x_left) / grid.dx));
  auto j1 = static_cast<Index>(std::floor((win.hi - grid.x_left) / grid.dx));
  j0 = std::max<Index>(j0, 0);
  j1 = std::min<Index>(j1, grid.n_cells - 1);
  for (Index j = j0; j <= j1; ++j) {
    double lo = std::max(grid.edge(j), win.lo);
    double hi = std::min(grid.edge(j + 1), win.hi);
    if (hi > lo) {
      double d = f[j] - ref;
      acc += (hi - lo) * d * d;
    }
  }
  return acc;
}

double lyapunov_velocity(const GridSpec& grid, const ArrayXd& v, double t,
                         const WindowParams& params) {
  return window_l2(grid, v, window(t, params), params.vbar);
}

double lyapunov_density(const GridSpec& grid, const ArrayXd& rho, double t,
                        const WindowParams& params, double rhobar) {
  return window_l2(grid, rho, window(t, params), rhobar);
}

double exp_bound(double L0, double t, double eta, double vprime_max,
                 double rho_min) {
  if (rho_min <= 0.0)
    throw std::domain_error(
        "rho_min must be strictly positive for the exponential bound");
  if (!(vprime_max < 0.0))
    throw std::domain_error("vprime_max must be negative");
  if (eta <= 0.0) throw std::domain_error("eta must be positive");
  if (L0 < 0.0) throw std::domain_error("L0 must be nonnegative");
  return L0 * std::exp(2.0 * vprime_max * rho_min * t / eta);
}

double integrate_cells(const GridSpec& grid, const ArrayXd& rho, double a,
                       double b) {
  if (b <= a) return 0.0;
  require_covered(grid, {a, b});
  double acc = 0.0;
  auto j0 = static_cast<Index>(std::floor((a - grid.x_left) / grid.dx));
  auto j1 = static_cast<Index>(std::floor((b - grid.x_left) / grid.dx));
  j0 = std::max<Index>(j0, 0);
  j1 = std::min<Index>(j1, grid.n_cells - 1);
  for (Index j = j0; j <= j1; ++j) {
    double lo = std::max(grid.edge(j), a);
    double hi = std::min(grid.edge(j + 1), b);
    if (hi > lo) acc += (hi - lo) * rho[j];
  }
  return acc;
}

double nonlocal_argument_R(const GridSpec& grid, const ArrayXd& rho, double t,
                           double x, const WindowParams& params,
                           double rhobar) {
  double beta = params.b + params.vbar * t;
  if (x < beta - params.eta - 1e-9 || x > beta + 1e-9)
    throw std::domain_error("x outside the control window");
  double acc = integrate_cells(grid, rho, x, beta);
  acc += (x + params.eta - beta) * rhobar;
  return acc / params.eta;
}

IdentityResiduals identity_residuals(const GridSpec& grid, const Snapshot& prev,
                                     const Snapshot& cur, const Snapshot& next,
                                     const WindowParams& params,
                                     const VelocityModel& model,
                                     const Kernel& kernel, double rhobar) {
  if (kernel.kind() != KernelKind::constant)
    throw std::domain_error(
        "identity residuals require the constant kernel");
  Interval win = window(cur.t, params);
  require_covered(grid, win);
  double delta = 0.5 * (next.t - prev.t);
  if (!(delta > 0.0))
    throw std::invalid_argument("snapshots must be strictly ordered in time");

  // cells fully inside the window, two more dropped at each edge
  auto j_lo = static_cast<Index>(std::ceil((win.lo - grid.x_left) / grid.dx - 1e-9));
  auto j_hi = static_cast<Index>(std::floor((win.hi - grid.x_left) / grid.dx + 1e-9)) - 1;
  j_lo = std::max<Index>(j_lo + 2, 1);
  j_hi = std::min<Index>(j_hi - 2, grid.n_cells - 2);

  IdentityResiduals r{0.0, 0.0};
  double inv_eta = 1.0 / params.eta;
  for (Index j = j_lo; j <= j_hi; ++j) {
    double x = grid.center(j);
    double R = nonlocal_argument_R(grid, cur.rho, cur.t, x, params, rhobar);
    double dv = model.deriv(R);
    double dxV = (cur.v[j + 1] - cur.v[j - 1]) / (2.0 * grid.dx);
    double dtV = (next.v[j] - prev.v[j]) / (2.0 * delta);
    double rhs_x = inv_eta * (rhobar - cur.rho[j]) * dv;
    double rhs_t = inv_eta * (cur.rho[j] * cur.v[j] - params.vbar * rhobar) * dv;
    r.rx = std::max(r.rx, std::abs(dxV - rhs_x));
    r.rt = std::max(r.rt, std::abs(dtV - rhs_t));
  }
  return r;
}

MaxPrincipleReport check_max_principle(
    const std::vector<DiagnosticsRecord>& series, double rho_min_init,
    double rho_max_init, double tol) {
  MaxPrincipleReport r;
  for (const auto& rec : series) {
    if (std::isnan(rec.rho_min_obs)) continue;
    r.worst_undershoot = std::max(r.worst_undershoot, rho_min_init - rec.rho_min_obs);
    r.worst_overshoot = std::max(r.worst_overshoot, rec.rho_max_obs - rho_max_init);
  }
  r.pass = r.worst_undershoot <= tol && r.worst_overshoot <= tol;
  return r;
}

MaxPrincipleReport check_max_principle(const std::vector<Snapshot>& states,
                                       double rho_min_init, double rho_max_init,
                                       double tol) {
  MaxPrincipleReport r;
  for (const auto& s : states) {
    if (s.rho.size() == 0) continue;
    r.worst_undershoot = std::max(r.worst_undershoot, rho_min_init - s.rho.minCoeff());
    r.worst_overshoot = std::max(r.worst_overshoot, s.rho.maxCoeff() - rho_max_init);
  }
  r.pass = r.worst_undershoot <= tol && r.worst_overshoot <= tol;
  return r;
}

MassReport check_mass(const std::vector<DiagnosticsRecord>& series,
                      double rel_tol) {
  MassReport r;
  for (const auto& rec : series)
    if (!std::isnan(rec.mass_residual))
      r.worst_residual = std::max(r.worst_residual, std::abs(rec.mass_residual));
  r.pass = r.worst_residual <= rel_tol;
  return r;
}

}  // namespace nlwr
