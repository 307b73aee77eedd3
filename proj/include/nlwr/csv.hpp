#pragma once

#include "nlwr/diagnostics.hpp"
#include "nlwr/grid.hpp"
#include "nlwr/micro.hpp"

#include <string>
#include <vector>

namespace nlwr {

/// "%.12g", with the literal `NaN` for undefined quantities.
std::string format_double(double x);

/// Header: t,lnL,lnL_bound,lnL_tilde,rho_min_obs,rho_max_obs,mass_residual,
/// res_dxV,res_dtV. Logarithms are natural and computed at write time.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

/// Raw (non-logarithmic) Lyapunov series: t,L,L_bound,L_tilde.
void write_lyapunov_raw_csv(const std::string& path,
                            const std::vector<DiagnosticsRecord>& records);

/// One file per output time: x,rho,V rows per cell center.
void write_snapshot_csv(const std::string& dir, const GridSpec& grid,
                        const Snapshot& snap);
std::string snapshot_filename(double t);

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples);

}  // namespace nlwr
