#pragma once

#include "nlwr/grid.hpp"
#include "nlwr/model.hpp"

#include <limits>
#include <vector>

namespace nlwr {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Leading-vehicle window: beta(t) = b + vbar*t, window [beta-eta, beta].
struct WindowParams {
  double b = 0.0;
  double vbar = 0.0;
  double eta = 1.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

Interval window(double t, const WindowParams& params);

/// Cell-centered state at one output time.
struct Snapshot {
  double t = 0.0;
  ArrayXd rho;
  ArrayXd v;            // nonlocal velocity per cell
  double v_left = 0.0;  // ghost velocity feeding the first flux
};

struct DiagnosticsRecord {
  double t = 0.0;
  double L = kNaN;        // velocity Lyapunov value
  double L_bound = kNaN;  // exponential bound anchored at L(0)
  double L_tilde = kNaN;  // density Lyapunov value
  double rho_min_obs = kNaN;
  double rho_max_obs = kNaN;
  double mass_residual = kNaN;  // relative flux-form conservation defect
  double res_dxV = kNaN;        // max spatial identity defect
  double res_dtV = kNaN;        // max temporal identity defect
};

/// Exact integral of (f - ref)^2 over the window, piecewise constant per cell;
/// edge cells contribute their overlap fraction.
double window_l2(const GridSpec& grid, const ArrayXd& f, Interval win,
                 double ref);

double lyapunov_velocity(const GridSpec& grid, const ArrayXd& v, double t,
                         const WindowParams& params);

double lyapunov_density(const GridSpec& grid, const ArrayXd& rho, double t,
                        const WindowParams& params, double rhobar);

/// L0 * exp(2 * vprime_max * rho_min * t / eta); the exponent is negative.
double exp_bound(double L0, double t, double eta, double vprime_max,
                 double rho_min);

/// Exact piecewise integral of rho over [a,b] on the grid.
double integrate_cells(const GridSpec& grid, const ArrayXd& rho, double a,
                       double b);

/// R(t,x) = (1/eta) (int_x^beta rho + (x+eta-beta) rhobar); the argument of
/// the nonlocal velocity behind the leader under a constant kernel.
double nonlocal_argument_R(const GridSpec& grid, const ArrayXd& rho, double t,
                           double x, const WindowParams& params, double rhobar);

struct IdentityResiduals {
  double rx = kNaN;
  double rt = kNaN;
};

/// Residuals of the flow-identity pair for the nonlocal velocity, from three
/// consecutive snapshots (centered differences). Constant kernel only; 2 cells
/// at each window edge excluded.
IdentityResiduals identity_residuals(const GridSpec& grid, const Snapshot& prev,
                                     const Snapshot& cur, const Snapshot& next,
                                     const WindowParams& params,
                                     const VelocityModel& model,
                                     const Kernel& kernel, double rhobar);

struct MaxPrincipleReport {
  double worst_undershoot = 0.0;  // initial min minus observed min
  double worst_overshoot = 0.0;   // observed max minus initial max
  bool pass = false;
};

MaxPrincipleReport check_max_principle(const std::vector<DiagnosticsRecord>& series,
                                       double rho_min_init, double rho_max_init,
                                       double tol = 1e-12);
MaxPrincipleReport check_max_principle(const std::vector<Snapshot>& states,
                                       double rho_min_init, double rho_max_init,
                                       double tol = 1e-12);

struct MassReport {
  double worst_residual = 0.0;  // relative
  bool pass = false;
};

MassReport check_mass(const std::vector<DiagnosticsRecord>& series,
                      double rel_tol = 1e-9);

}  // namespace nlwr
