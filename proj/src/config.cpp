#include "nlwr/config.hpp"

#include "nlwr/micro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlwr {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    if (value == "inf") return std::numeric_limits<double>::infinity();
    double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("key '" + key + "': not a number: " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("key '" + key + "': not a boolean: " + value);
}

PiecewiseConstant parse_segments(const std::string& value) {
  PiecewiseConstant p;
  std::istringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item.front() != '(' || item.back() != ')')
      throw std::invalid_argument("init.segments: expected '(x_upper, value)': " + item);
    std::string body = item.substr(1, item.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("init.segments: expected '(x_upper, value)': " + item);
    double xu = parse_number("init.segments", trim(body.substr(0, comma)));
    double v = parse_number("init.segments", trim(body.substr(comma + 1)));
    p.segments.push_back({xu, v});
  }
  if (p.segments.empty())
    throw std::invalid_argument("init.segments: no segments given");
  return p;
}

std::string segments_to_string(const PiecewiseConstant& p) {
  std::ostringstream out;
  for (size_t i = 0; i < p.segments.size(); ++i) {
    if (i) out << "; ";
    char buf[64];
    if (std::isinf(p.segments[i].x_upper))
      std::snprintf(buf, sizeof(buf), "(inf, %.12g)", p.segments[i].value);
    else
      std::snprintf(buf, sizeof(buf), "(%.12g, %.12g)", p.segments[i].x_upper,
                    p.segments[i].value);
    out << buf;
  }
  return out.str();
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

ConfigMap parse_config_text(std::istream& in, const std::string& name) {
  ConfigMap map;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                  ": empty key or value");
    map.emplace_back(key, value);
  }
  return map;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config_text(in, path);
}

std::vector<std::string> preset_names() {
  return {"fig1-const", "fig1-lin", "fig1-conc", "fig2", "fig3-micro"};
}

bool is_preset(const std::string& name) {
  auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ConfigMap preset(const std::string& name) {
  ConfigMap base = {
      {"scenario", "macro"},
      {"velocity.kind", "linear"},
      {"velocity.rho_max", "1"},
      {"velocity.v_free", "1"},
      {"kernel.kind", "constant"},
      {"eta", "1"},
      {"vbar", "0.5"},
      {"b", "0"},
      {"grid.dx", "0.005"},
      {"grid.t_end", "20"},
      {"grid.cfl", "1"},
      {"init.segments", "(0, 1); (inf, 0.5)"},
      {"output.cadence", "0.1"},
  };
  auto set = [&](const std::string& k, const std::string& v) {
    for (auto& [key, value] : base)
      if (key == k) {
        value = v;
        return;
      }
    base.emplace_back(k, v);
  };
  if (name == "fig1-const") return base;
  if (name == "fig1-lin") {
    set("kernel.kind", "linear");
    return base;
  }
  if (name == "fig1-conc") {
    set("kernel.kind", "concave");
    return base;
  }
  if (name == "fig2") {
    set("init.segments", "(-0.5, 0.01); (0, 0.35); (inf, 0.5)");
    return base;
  }
  if (name == "fig3-micro") {
    set("scenario", "micro");
    set("micro.h", "0.01");
    set("output.cadence", "0.01");  // resolves individual window crossings
    return base;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

ScenarioConfig build_scenario(const ConfigMap& map) {
  ScenarioConfig cfg;
  double rho_max = 1.0, v_free = 1.0, eta = 1.0;
  std::string velocity_kind = "linear", kernel_kind = "constant";
  bool have_segments = false;

  for (const auto& [key, value] : map) {
    if (key == "scenario") {
      if (value == "macro")
        cfg.micro = false;
      else if (value == "micro")
        cfg.micro = true;
      else
        throw std::invalid_argument("scenario must be 'macro' or 'micro'");
    } else if (key == "velocity.kind") {
      if (value != "linear")
        throw std::invalid_argument(
            "only the linear speed law is expressible in config files");
      velocity_kind = value;
    } else if (key == "velocity.rho_max") {
      rho_max = parse_number(key, value);
    } else if (key == "velocity.v_free") {
      v_free = parse_number(key, value);
    } else if (key == "kernel.kind") {
      kernel_kind = value;
    } else if (key == "eta") {
      eta = parse_number(key, value);
    } else if (key == "vbar") {
      cfg.vbar = parse_number(key, value);
    } else if (key == "b") {
      cfg.b = parse_number(key, value);
    } else if (key == "grid.dx") {
      cfg.dx = parse_number(key, value);
    } else if (key == "grid.t_end") {
      cfg.t_end = parse_number(key, value);
    } else if (key == "grid.cfl") {
      cfg.cfl = parse_number(key, value);
    } else if (key == "grid.x_left") {
      cfg.x_left = parse_number(key, value);
    } else if (key == "grid.x_right") {
      cfg.x_right = parse_number(key, value);
    } else if (key == "init.segments") {
      cfg.initial = parse_segments(value);
      have_segments = true;
    } else if (key == "output.cadence") {
      cfg.cadence = parse_number(key, value);
    } else if (key == "output.snapshots") {
      cfg.snapshots = parse_bool(key, value);
    } else if (key == "output.trajectories") {
      cfg.trajectories = parse_bool(key, value);
    } else if (key == "micro.h") {
      cfg.micro_h = parse_number(key, value);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  if (!have_segments)
    throw std::invalid_argument("init.segments is required");
  cfg.model = VelocityModel::linear(rho_max, v_free);
  cfg.kernel = Kernel::make(kernel_kind_from_string(kernel_kind), eta);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& target) {
  ConfigMap map = is_preset(target) ? preset(target) : parse_config_file(target);
  ScenarioConfig cfg = build_scenario(map);
  cfg.id = target;
  return cfg;
}

ConfigMap resolve(const ScenarioConfig& config) {
  ScenarioConfig cfg = config;  // materialize domain defaults
  if (cfg.micro) {
    if (!cfg.x_left) cfg.x_left = micro_default_coverage_left(cfg);
  } else {
    GridSpec g = cfg.make_grid();
    cfg.x_left = g.x_left;
    cfg.x_right = g.x_right();
  }
  ConfigMap map = {
      {"scenario", cfg.micro ? "micro" : "macro"},
      {"velocity.kind", "linear"},
      {"velocity.rho_max", num(cfg.model.rho_max())},
      {"velocity.v_free", num(cfg.model.v0())},
      {"kernel.kind", to_string(cfg.kernel.kind())},
      {"eta", num(cfg.kernel.eta())},
      {"vbar", num(cfg.vbar)},
      {"b", num(cfg.b)},
      {"grid.dx", num(cfg.dx)},
      {"grid.t_end", num(cfg.t_end)},
      {"grid.cfl", num(cfg.cfl)},
      {"init.segments", segments_to_string(cfg.initial)},
      {"output.cadence", num(cfg.cadence)},
      {"output.snapshots", cfg.snapshots ? "true" : "false"},
      {"output.trajectories", cfg.trajectories ? "true" : "false"},
  };
  if (cfg.x_left) map.emplace_back("grid.x_left", num(*cfg.x_left));
  if (cfg.x_right) map.emplace_back("grid.x_right", num(*cfg.x_right));
  if (cfg.micro) map.emplace_back("micro.h", num(cfg.micro_h));
  return map;
}

void write_config_file(const std::string& path, const ConfigMap& map) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& [key, value] : map) out << key << " = " << value << '\n';
}

ConfigMap apply_overrides(ConfigMap base, const ConfigMap& overrides) {
  for (const auto& [key, value] : overrides) {
    bool found = false;
    for (auto& [k, v] : base)
      if (k == key) {
        v = value;
        found = true;
      }
    if (!found) base.emplace_back(key, value);
  }
  return base;
}

}  // namespace nlwr
