// Acceptance suite: one line per criterion, nonzero exit on hard failure.
#include "nlwr/config.hpp"
#include "nlwr/macro.hpp"
#include "nlwr/micro.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace nlwr;

namespace {

int g_failures = 0;

void report(bool ok, bool hard, const std::string& name,
            const std::string& detail) {
  const char* tag = ok ? "[PASS]" : (hard ? "[FAIL]" : "[WARN]");
  std::printf("%s %s: %s\n", tag, name.c_str(), detail.c_str());
  if (!ok && hard) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

double lnL(const DiagnosticsRecord& r) { return std::log(r.L); }

// least-squares slope of ln L over t in [t_lo, t_hi]
double tail_slope(const std::vector<DiagnosticsRecord>& recs, double t_lo,
                  double t_hi) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (const auto& r : recs) {
    if (r.t < t_lo - 1e-9 || r.t > t_hi + 1e-9 || !(r.L > 0.0)) continue;
    double y = std::log(r.L);
    st += r.t;
    sy += y;
    stt += r.t * r.t;
    sty += r.t * y;
    ++n;
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

const DiagnosticsRecord& at_time(const std::vector<DiagnosticsRecord>& recs,
                                 double t) {
  for (const auto& r : recs)
    if (std::abs(r.t - t) <= 1e-9) return r;
  throw std::runtime_error("no record at requested time");
}

double initial_window_value(const ScenarioConfig& base, double dx) {
  ScenarioConfig c = base;
  c.dx = dx;
  GridSpec grid = c.make_grid();
  MacroState s;
  s.rho = cell_averages(c.initial, grid);
  s.left_ghost = c.initial.value_at(grid.x_left);
  s.right_ghost = c.rho_bar();
  auto vf = nonlocal_velocities(s, kernel_weights(c.kernel, dx), c.model);
  return lyapunov_velocity(grid, vf.v, 0.0, {c.b, c.vbar, c.eta()});
}

// Identity defects on a smooth bump riding inside the window, measured at
// t=2 with the temporal spacing refined alongside the grid. The jam presets
// keep smeared discontinuities pinned to the window edges, so their max-norm
// defect is not expected to shrink; a smooth state isolates the scheme order.
IdentityResiduals identity_study(double dx) {
  GridSpec grid{-3.0, dx, static_cast<Index>(std::llround(6.0 / dx))};
  MacroState s;
  s.rho.resize(grid.n_cells);
  for (Index j = 0; j < grid.n_cells; ++j) {
    double u = (grid.center(j) + 0.5) / 0.12;
    s.rho[j] = 0.5 + 0.2 * std::exp(-u * u);
  }
  s.left_ghost = s.right_ghost = 0.5;
  auto model = VelocityModel::linear();
  auto kernel = Kernel::constant(1.0);
  auto w = kernel_weights(kernel, dx);

  const double delta = dx;
  const double stops[3] = {2.0 - delta, 2.0, 2.0 + delta};
  Snapshot snaps[3];
  int k = 0;
  while (k < 3) {
    VelocityField vf = nonlocal_velocities(s, w, model);
    if (s.t >= stops[k] - 1e-12) {
      snaps[k] = {s.t, s.rho, vf.v, vf.v_left};
      if (++k == 3) break;
    }
    double dt = std::min(cfl_dt(vf.v, dx, 1.0, 1.0), stops[k] - s.t);
    s = advance(s, vf, dx, 1.0, dt);
  }
  return identity_residuals(grid, snaps[0], snaps[1], snaps[2],
                            {0.0, 0.5, 1.0}, model, kernel, 0.5);
}

}  // namespace

int main() {
  // --- shared runs -------------------------------------------------------
  auto t0 = std::chrono::steady_clock::now();
  MacroRun fig1 = run_macro(load_config("fig1-const"));
  double fig1_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  // 1. constant-kernel decay trace against the published curve
  {
    double l0 = lnL(fig1.records.front());
    double l20 = lnL(at_time(fig1.records, 20.0));
    double slope = tail_slope(fig1.records, 12.0, 20.0);
    bool ok = std::abs(l0 - (-2.51)) <= 0.1 && std::abs(l20 - (-23.95)) <= 0.5 &&
              std::abs(slope - (-1.0)) <= 0.05 && fig1_seconds < 60.0;
    report(ok, true, "1 constant-kernel decay trace",
           fmt("lnL(0)=%.4f (want -2.51+/-0.1), lnL(20)=%.3f (want "
               "-23.95+/-0.5)",
               l0, l20) +
               fmt(", tail slope=%.4f (want -1+/-0.05), %.1fs", slope,
                   fig1_seconds));
  }

  // 2. exponential bound dominance at every output time
  {
    double worst = 0.0;
    for (const auto& r : fig1.records)
      worst = std::max(worst, r.L / r.L_bound - 1.0);
    report(worst <= 1e-6, true, "2 decay bound dominance",
           fmt("max L/bound-1 = %.3g (tolerance 1e-6), rate %.3f", worst,
               fig1.decay_rate));
  }

  // 3. soft: the same bound holds for the other kernels
  {
    const char* names[2] = {"fig1-lin", "fig1-conc"};
    double targets[2] = {-33.2, -29.6};
    for (int i = 0; i < 2; ++i) {
      MacroRun run = run_macro(load_config(names[i]));
      double worst = 0.0;
      for (const auto& r : run.records)
        worst = std::max(worst, r.L / r.L_bound - 1.0);
      double l20 = lnL(at_time(run.records, 20.0));
      bool ok = worst <= 1e-6 && std::abs(l20 - targets[i]) <= 1.0;
      report(ok, false, std::string("3 bound holds for ") + names[i],
             fmt("max L/bound-1 = %.3g, lnL(20)=%.3f (want %.1f+/-1.0)", worst,
                 l20, targets[i]));
    }
  }

  // 4. density functional counterexample: non-monotone trace
  {
    MacroRun fig2 = run_macro(load_config("fig2"));
    double l0 = std::log(fig2.records.front().L_tilde);
    double best_rise = 0.0, running_min = 1e300;
    for (const auto& r : fig2.records) {
      if (r.t < 0.15 - 1e-9 || r.t > 1.2 + 1e-9 || !(r.L_tilde > 0.0)) continue;
      double y = std::log(r.L_tilde);
      running_min = std::min(running_min, y);
      best_rise = std::max(best_rise, y - running_min);
    }
    bool ok = std::abs(l0 - (-2.03)) <= 0.05 && best_rise >= 0.002;
    report(ok, true, "4 density functional grows transiently",
           fmt("lnLt(0)=%.4f (want -2.03+/-0.05), rise in [0.15,1.2] = %.4f "
               "(want >= 0.002)",
               l0, best_rise));
  }

  // 5. microscopic companion: initial value, bound line, window-edge jumps
  {
    MicroRun fig3 = run_micro(load_config("fig3-micro"));
    double l0 = lnL(fig3.records.front());
    bool l0_ok = std::abs(l0 - (-2.485)) <= 0.05;
    // discrete initial value sits slightly above the sharp-profile intercept,
    // so the reference line gets the same slack as the intercept tolerance
    double excess = -1e300;
    for (const auto& r : fig3.records)
      if (r.L > 0.0)
        excess = std::max(excess, std::log(r.L) - (-2.485 - r.t + 0.1));
    JumpAnalysis jumps = detect_jumps(fig3.records, fig3.window_info);
    report(l0_ok && jumps.n_attributed >= 1, true,
           "5 microscopic window trace",
           fmt("lnL(0)=%.4f (want -2.485+/-0.05), jumps=%.0f attributed=%.0f",
               l0, double(jumps.n_jumps), double(jumps.n_attributed)));
    report(excess <= 0.0, false, "5 microscopic trace under reference line",
           fmt("max lnL-(-2.485-t+0.1) = %.4f (want <= 0)", excess));
  }

  // 6. closed-form oracle 1/12 and first-order convergence
  {
    ScenarioConfig base = load_config("fig1-const");
    const double exact = 1.0 / 12.0;
    double e20 = std::abs(initial_window_value(base, 0.02) - exact) / exact;
    double e10 = std::abs(initial_window_value(base, 0.01) - exact) / exact;
    double e5 = std::abs(fig1.records.front().L - exact) / exact;
    bool ok = e5 <= 0.02 && e20 / e10 >= 1.5 && e10 / e5 >= 1.5;
    report(ok, true, "6 sharp-profile window value",
           fmt("rel err %.4f/%.4f/%.4f at dx=0.02/0.01/0.005 (want <=2%% and "
               "ratio >=1.5)",
               e20, e10, e5));
  }

  // 7. property suite
  {
    // extremes and conservation across every preset
    double worst_mp = 0.0, worst_mass = 0.0;
    for (const auto& name : preset_names()) {
      ScenarioConfig c = load_config(name);
      std::vector<DiagnosticsRecord> recs;
      double lo, hi;
      if (c.micro) {
        MicroRun run = run_micro(c);
        recs = run.records;
        lo = c.initial.min_value();
        hi = c.initial.max_value();
      } else if (name == "fig1-const") {
        recs = fig1.records;
        lo = fig1.rho_min_init;
        hi = fig1.rho_max_init;
      } else {
        MacroRun run = run_macro(c);
        recs = run.records;
        lo = run.rho_min_init;
        hi = run.rho_max_init;
      }
      auto mp = check_max_principle(recs, lo, hi, 1e-12);
      worst_mp = std::max({worst_mp, mp.worst_undershoot, mp.worst_overshoot});
      worst_mass = std::max(worst_mass, check_mass(recs).worst_residual);
    }
    report(worst_mp <= 1e-12, true, "7a maximum principle on all presets",
           fmt("worst excursion %.3g (tolerance 1e-12)", worst_mp));
    report(worst_mass <= 1e-9, true, "7b conservation audit",
           fmt("worst relative residual %.3g (tolerance 1e-9)", worst_mass));

    double worst_norm = 0.0;
    for (auto kind :
         {KernelKind::constant, KernelKind::linear, KernelKind::concave}) {
      auto w = kernel_weights(Kernel::make(kind, 1.0), 0.005);
      worst_norm = std::max(worst_norm, std::abs(w.gamma.sum() - 1.0));
    }
    report(worst_norm <= 1e-12, true, "7c stencil weights normalized",
           fmt("worst |sum-1| = %.3g", worst_norm));

    MacroState eq;
    eq.rho = ArrayXd::Constant(50, 0.5);
    eq.left_ghost = eq.right_ghost = 0.5;
    MacroState eq2 = godunov_step(
        eq, kernel_weights(Kernel::constant(1.0), 0.1), VelocityModel::linear(),
        0.05);
    double drift = (eq2.rho - 0.5).abs().maxCoeff();
    report(drift == 0.0, true, "7d equilibrium fixed point",
           fmt("max drift %.3g (want exactly 0)", drift));

    IdentityResiduals rc = identity_study(0.02);
    IdentityResiduals rf = identity_study(0.01);
    bool ok = rc.rx / rf.rx >= 1.5 && rc.rt / rf.rt >= 1.5;
    report(ok, true, "7e flow-identity residual refinement",
           fmt("dx ratio %.2f, dt ratio %.2f (want >= 1.5)", rc.rx / rf.rx,
               rc.rt / rf.rt));
  }

  // 8. insensitivity to the domain truncation
  {
    ScenarioConfig wide = load_config("fig1-const");
    double v0 = wide.model.v0(), eta = wide.eta();
    wide.x_left = wide.b - 2.0 * (v0 * wide.t_end + 2.0 * eta);
    wide.x_right = wide.b + 2.0 * (wide.vbar * wide.t_end + 2.0 * eta);
    MacroRun run = run_macro(wide);
    double worst = 0.0;
    for (double t : {5.0, 10.0, 20.0})
      worst = std::max(worst, std::abs(lnL(at_time(run.records, t)) -
                                       lnL(at_time(fig1.records, t))));
    report(worst < 1e-3, true, "8 domain-doubling robustness",
           fmt("max |dlnL| at t=5,10,20: %.3g (tolerance 1e-3)", worst));
  }

  std::printf("%s: %d hard failure(s)\n", g_failures ? "FAILED" : "OK",
              g_failures);
  return g_failures ? 1 : 0;
}
