#include "nlwr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlwr {

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNaN; }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

double parse_field(const std::string& s) {
  if (s == "NaN") return kNaN;
  return std::stod(s);
}

}  // namespace

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records) {
  auto out = open_out(path);
  out << "t,lnL,lnL_bound,lnL_tilde,rho_min_obs,rho_max_obs,mass_residual,"
         "res_dxV,res_dtV\n";
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(safe_log(r.L)) << ','
        << format_double(safe_log(r.L_bound)) << ','
        << format_double(safe_log(r.L_tilde)) << ','
        << format_double(r.rho_min_obs) << ',' << format_double(r.rho_max_obs)
        << ',' << format_double(r.mass_residual) << ','
        << format_double(r.res_dxV) << ',' << format_double(r.res_dtV) << '\n';
  }
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open diagnostics file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("t,lnL,lnL_bound,lnL_tilde", 0) != 0)
    throw std::runtime_error("corrupt diagnostics file: bad header in " + path);
  std::vector<DiagnosticsRecord> records;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ss, field, ',')) vals.push_back(parse_field(field));
    if (vals.size() != 9)
      throw std::runtime_error("corrupt diagnostics file: line " +
                               std::to_string(lineno));
    DiagnosticsRecord r;
    r.t = vals[0];
    r.L = std::isnan(vals[1]) ? 0.0 : std::exp(vals[1]);
    r.L_bound = std::isnan(vals[2]) ? 0.0 : std::exp(vals[2]);
    r.L_tilde = std::isnan(vals[3]) ? 0.0 : std::exp(vals[3]);
    r.rho_min_obs = vals[4];
    r.rho_max_obs = vals[5];
    r.mass_residual = vals[6];
    r.res_dxV = vals[7];
    r.res_dtV = vals[8];
    records.push_back(r);
  }
  return records;
}

void write_lyapunov_raw_csv(const std::string& path,
                            const std::vector<DiagnosticsRecord>& records) {
  auto out = open_out(path);
  out << "t,L,L_bound,L_tilde\n";
  for (const auto& r : records)
    out << format_double(r.t) << ',' << format_double(r.L) << ','
        << format_double(r.L_bound) << ',' << format_double(r.L_tilde) << '\n';
}

std::string snapshot_filename(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snap_t%.4f.csv", t);
  return buf;
}

void write_snapshot_csv(const std::string& dir, const GridSpec& grid,
                        const Snapshot& snap) {
  auto out = open_out(dir + "/" + snapshot_filename(snap.t));
  out << "x,rho,V\n";
  for (Index j = 0; j < grid.n_cells; ++j)
    out << format_double(grid.center(j)) << ',' << format_double(snap.rho[j])
        << ',' << format_double(snap.v[j]) << '\n';
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples) {
  auto out = open_out(path);
  out << "t,i,x,V\n";
  for (const auto& s : samples)
    out << format_double(s.t) << ',' << s.i << ',' << format_double(s.x) << ','
        << format_double(s.v) << '\n';
}

}  // namespace nlwr
