#include "nlwr/config.hpp"
#include "nlwr/csv.hpp"
#include "nlwr/model.hpp"
#include "nlwr/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <filesystem>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;

// exit codes: 0 ok, 1 validation error, 2 runtime/solver error, 3 check failure

int cmd_run(const std::string& target, const std::string& out_dir,
            bool snapshots, bool trajectories) {
  nlwr::ScenarioConfig cfg;
  try {
    cfg = nlwr::load_config(target);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  cfg.snapshots = cfg.snapshots || snapshots;
  cfg.trajectories = cfg.trajectories || trajectories;
  nlwr::RunResult r = nlwr::run_to_dir(cfg, out_dir);
  if (r.status != 0) {
    std::cerr << "error: " << r.error << '\n';
    return r.status;
  }
  std::cout << "wrote " << r.artifacts.size() << " artifacts to " << out_dir
            << " (" << r.wall_time_s << " s)\n";
  return 0;
}

struct SweepPoint {
  nlwr::ConfigMap overrides;
  std::string dir_name;
};

std::vector<SweepPoint> expand_grid(const std::string& spec) {
  // "key=v1,v2;key2=w1,w2" -> cartesian product, stable ordering
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::istringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("grid spec: expected key=v1,v2,...");
    std::string key = part.substr(0, eq);
    std::vector<std::string> values;
    std::istringstream vs(part.substr(eq + 1));
    std::string v;
    while (std::getline(vs, v, ',')) values.push_back(v);
    if (values.empty()) throw std::invalid_argument("grid spec: empty value list");
    axes.emplace_back(key, values);
  }
  if (axes.empty()) throw std::invalid_argument("empty parameter grid");

  std::vector<SweepPoint> points{{{}, ""}};
  for (const auto& [key, values] : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points)
      for (const auto& v : values) {
        SweepPoint q = p;
        q.overrides.emplace_back(key, v);
        std::string tag = key + "-" + v;
        for (auto& c : tag)
          if (c == '.' || c == '/' || c == ' ') c = '_';
        q.dir_name += (q.dir_name.empty() ? "" : "__") + tag;
        next.push_back(q);
      }
    points = std::move(next);
  }
  return points;
}

int cmd_sweep(const std::string& tmpl, const std::string& grid,
              const std::string& out_dir, int jobs) {
  nlwr::ConfigMap base;
  std::vector<SweepPoint> points;
  try {
    base = nlwr::is_preset(tmpl) ? nlwr::preset(tmpl)
                                 : nlwr::parse_config_file(tmpl);
    points = expand_grid(grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  std::vector<nlwr::RunResult> results(points.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (size_t i; (i = cursor.fetch_add(1)) < points.size();) {
      char prefix[16];
      std::snprintf(prefix, sizeof(prefix), "run_%03zu_", i);
      std::string dir = out_dir + "/" + prefix + points[i].dir_name;
      try {
        nlwr::ScenarioConfig cfg = nlwr::build_scenario(
            nlwr::apply_overrides(base, points[i].overrides));
        cfg.id = tmpl + "+" + points[i].dir_name;
        results[i] = nlwr::run_to_dir(cfg, dir);
      } catch (const std::exception& e) {  // failures stay isolated per run
        results[i].status = 1;
        results[i].error = e.what();
        results[i].out_dir = dir;
      }
    }
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::filesystem::create_directories(out_dir);
  std::ofstream index(out_dir + "/index.csv");
  index << "index,dir,params,status\n";
  bool any_failed = false;
  for (size_t i = 0; i < points.size(); ++i) {
    std::string params;
    for (const auto& [k, v] : points[i].overrides)
      params += (params.empty() ? "" : " ") + k + "=" + v;
    index << i << ',' << results[i].out_dir << ',' << params << ','
          << results[i].status << '\n';
    if (results[i].status != 0) {
      any_failed = true;
      std::cerr << "run " << i << " failed: " << results[i].error << '\n';
    }
  }
  std::cout << "sweep: " << points.size() << " runs, index at " << out_dir
            << "/index.csv\n";
  return any_failed ? 2 : 0;
}

int cmd_check(const std::string& dir) {
  nlwr::CheckReport rep;
  try {
    rep = nlwr::check_output_dir(dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  json j;
  j["scenario"] = rep.scenario_id;
  j["bound_dominance"] = {{"hard", rep.bound_is_hard},
                          {"ok", rep.bound_ok},
                          {"worst_excess", rep.worst_bound_excess}};
  j["max_principle"] = {{"ok", rep.max_principle_ok},
                        {"worst_undershoot", rep.worst_undershoot},
                        {"worst_overshoot", rep.worst_overshoot}};
  j["mass"] = {{"ok", rep.mass_ok},
               {"worst_residual", rep.worst_mass_residual}};
  j["monotone_L"] = {{"applicable", rep.monotone_applicable},
                     {"ok", rep.monotone_ok}};
  j["warnings"] = rep.warnings;
  j["pass"] = rep.pass();
  std::cout << j.dump(2) << '\n';
  return rep.pass() ? 0 : 3;
}

int cmd_weights(const std::string& kernel, double dx, double eta) {
  try {
    nlwr::Kernel k = nlwr::Kernel::make(nlwr::kernel_kind_from_string(kernel), eta);
    nlwr::WeightTable w = nlwr::kernel_weights(k, dx);
    std::cout << "k,gamma\n";
    for (Eigen::Index i = 0; i < w.gamma.size(); ++i)
      std::cout << i << ',' << nlwr::format_double(w.gamma[i]) << '\n';
    std::cout << "# sum = " << nlwr::format_double(w.gamma.sum())
              << ", tail mass = " << nlwr::format_double(w.tail_mass) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal LWR traffic-flow simulator with Lyapunov diagnostics"};
  app.require_subcommand(1);

  std::string target, out_dir, grid_spec, check_dir, kernel;
  double dx = 0.0, eta = 0.0;
  bool snapshots = false, trajectories = false;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run a preset or config file");
  run->add_option("target", target, "preset name or config path")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--snapshots", snapshots, "emit per-time density snapshots");
  run->add_flag("--trajectories", trajectories, "emit vehicle trajectories (micro)");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
  sweep->add_option("template", target, "preset name or config path")->required();
  sweep->add_option("--grid", grid_spec, "key=v1,v2;key2=w1,...")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--jobs", jobs, "parallel workers")->default_val(1);

  auto* check = app.add_subcommand("check", "audit a finished run directory");
  check->add_option("dir", check_dir, "run output directory")->required();

  auto* weights = app.add_subcommand("weights", "print the gamma weight table");
  weights->add_option("kernel", kernel, "constant|linear|concave")->required();
  weights->add_option("dx", dx, "grid spacing")->required();
  weights->add_option("eta", eta, "nonlocal reach")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(target, out_dir, snapshots, trajectories);
  if (sweep->parsed()) return cmd_sweep(target, grid_spec, out_dir, jobs);
  if (check->parsed()) return cmd_check(check_dir);
  if (weights->parsed()) return cmd_weights(kernel, dx, eta);
  return 1;
}
