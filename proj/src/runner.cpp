#include "nlwr/runner.hpp"

#include "nlwr/config.hpp"
#include "nlwr/csv.hpp"
#include "nlwr/macro.hpp"
#include "nlwr/micro.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlwr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_json(const ScenarioConfig& cfg) {
  json j = json::object();
  for (const auto& [key, value] : resolve(cfg)) j[key] = value;
  return j;
}

void write_manifest(const RunResult& r, const ScenarioConfig& cfg,
                    KernelKind kernel_kind, bool micro) {
  json j;
  j["schema"] = 1;
  j["scenario"] = r.scenario_id;
  j["kind"] = micro ? "micro" : "macro";
  j["kernel"] = to_string(kernel_kind);
  j["config"] = config_json(cfg);
  j["status"] = r.status;
  j["error"] = r.error;
  j["wall_time_s"] = r.wall_time_s;
  j["artifacts"] = r.artifacts;
  j["rho_min_init"] = r.rho_min_init;
  j["rho_max_init"] = r.rho_max_init;
  j["L0"] = r.L0;
  j["decay_rate"] = r.decay_rate;
  if (micro) {
    j["micro_jumps"] = r.micro_jumps;
    j["micro_attributed"] = r.micro_attributed;
  }
  std::ofstream out(r.out_dir + "/manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace

RunResult run_to_dir(const ScenarioConfig& config, const std::string& out_dir) {
  RunResult r;
  r.scenario_id = config.id;
  r.out_dir = out_dir;
  fs::create_directories(out_dir);

  auto t0 = std::chrono::steady_clock::now();
  try {
    config.validate();
  } catch (const std::exception& e) {
    r.status = 1;
    r.error = e.what();
    write_manifest(r, config, config.kernel.kind(), config.micro);
    return r;
  }

  try {
    write_config_file(out_dir + "/resolved_config.cfg", resolve(config));
    r.artifacts.push_back("resolved_config.cfg");

    std::vector<DiagnosticsRecord> records;
    if (config.micro) {
      MicroRun run = run_micro(config);
      records = run.records;
      r.rho_min_init = run.rho_min_init;
      r.rho_max_init = config.initial.max_value();
      r.L0 = run.L0;
      r.decay_rate = run.decay_rate;
      JumpAnalysis jumps = detect_jumps(run.records, run.window_info);
      r.micro_jumps = jumps.n_jumps;
      r.micro_attributed = jumps.n_attributed;
      {
        std::ofstream out(out_dir + "/micro_window.csv");
        out << "t,first,last\n";
        for (const auto& w : run.window_info)
          out << format_double(w.t) << ',' << w.first << ',' << w.last << '\n';
        r.artifacts.push_back("micro_window.csv");
      }
      if (config.trajectories) {
        write_trajectory_csv(out_dir + "/trajectory.csv", run.trajectory);
        r.artifacts.push_back("trajectory.csv");
      }
    } else {
      MacroRun run = run_macro(config);
      records = run.records;
      r.rho_min_init = run.rho_min_init;
      r.rho_max_init = run.rho_max_init;
      r.L0 = run.L0;
      r.decay_rate = run.decay_rate;
      if (config.snapshots) {
        for (const auto& snap : run.snapshots) {
          write_snapshot_csv(out_dir, run.grid, snap);
          r.artifacts.push_back(snapshot_filename(snap.t));
        }
      }
    }
    write_diagnostics_csv(out_dir + "/diagnostics.csv", records);
    r.artifacts.push_back("diagnostics.csv");
    write_lyapunov_raw_csv(out_dir + "/lyapunov_raw.csv", records);
    r.artifacts.push_back("lyapunov_raw.csv");
  } catch (const std::invalid_argument& e) {
    r.status = 1;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = 2;
    r.error = e.what();
  }
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(r, config, config.kernel.kind(), config.micro);
  return r;
}

CheckReport check_output_dir(const std::string& dir) {
  CheckReport rep;
  std::ifstream mf(dir + "/manifest.json");
  if (!mf) throw std::runtime_error("no manifest.json in " + dir);
  json manifest = json::parse(mf);
  rep.found = true;
  rep.scenario_id = manifest.value("scenario", "?");
  bool micro = manifest.value("kind", "macro") == "micro";
  std::string kernel = manifest.value("kernel", "constant");
  double rho_min_init = manifest.value("rho_min_init", 0.0);
  double rho_max_init = manifest.value("rho_max_init", 0.0);

  auto records = read_diagnostics_csv(dir + "/diagnostics.csv");
  // raw values avoid the round trip through logarithms where available
  std::ifstream raw(dir + "/lyapunov_raw.csv");
  if (raw) {
    std::string line;
    std::getline(raw, line);  // header
    size_t i = 0;
    while (std::getline(raw, line) && i < records.size()) {
      std::istringstream ss(line);
      std::string f;
      std::getline(ss, f, ',');
      std::getline(ss, f, ',');
      records[i].L = f == "NaN" ? 0.0 : std::stod(f);
      std::getline(ss, f, ',');
      records[i].L_bound = f == "NaN" ? 0.0 : std::stod(f);
      std::getline(ss, f, ',');
      records[i].L_tilde = f == "NaN" ? 0.0 : std::stod(f);
      ++i;
    }
  }

  rep.bound_is_hard = !micro && kernel == "constant";
  for (const auto& rec : records) {
    if (rec.L_bound > 0.0) {
      double excess = rec.L / rec.L_bound - 1.0;
      rep.worst_bound_excess = std::max(rep.worst_bound_excess, excess);
    }
  }
  rep.bound_ok = rep.worst_bound_excess <= 1e-6;
  if (!rep.bound_is_hard && !rep.bound_ok)
    rep.warnings.push_back(
        "Lyapunov trace exceeds the constant-kernel bound (informational: "
        "no theory covers this configuration)");

  if (!micro) {
    auto mp = check_max_principle(records, rho_min_init, rho_max_init);
    rep.max_principle_ok = mp.pass;
    rep.worst_undershoot = mp.worst_undershoot;
    rep.worst_overshoot = mp.worst_overshoot;
    auto mass = check_mass(records);
    rep.mass_ok = mass.pass;
    rep.worst_mass_residual = mass.worst_residual;
  }

  if (rep.bound_is_hard) {
    rep.monotone_applicable = true;
    for (size_t i = 1; i < records.size(); ++i)
      if (records[i].L > records[i - 1].L * (1.0 + 1e-12))
        rep.monotone_ok = false;
  }
  return rep;
}

}  // namespace nlwr
