// Copyright 2026 The InPipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "inpipe/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "inpipe/csv.hpp"
#include "inpipe/error.hpp"

namespace inpipe {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kMm = 1e-3;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = csv::parse_number(parts[i]);
  }
  return v;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += csv::format_number(v[i]);
  }
  return out;
}

std::vector<Obstacle> parse_obstacles(const std::string& text) {
  std::vector<Obstacle> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ';')) {
    if (item.empty()) continue;
    const Eigen::VectorXd v = parse_vector(item);
    if (v.size() != 3) {
      throw ValidationError("obstacle needs 's,h,w' in mm, got '" + item + "'");
    }
    out.push_back({v[0] * kMm, v[1] * kMm, v[2] * kMm});
  }
  return out;
}

std::string format_obstacles(const std::vector<Obstacle>& obstacles) {
  std::string out;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (i) out += "; ";
    const Obstacle& o = obstacles[i];
    out += csv::format_number(o.position / kMm) + "," +
           csv::format_number(o.height / kMm) + "," +
           csv::format_number(o.extent / kMm);
  }
  return out;
}

bool parse_switch(const std::string& text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ValidationError("expected on/off, got '" + text + "'");
}

// Keys whose defaults depend on other keys.
struct Deferred {
  std::optional<double> i_trig;
  std::optional<double> i_release;
  std::optional<double> t_max;
};

struct Key {
  const char* section;
  const char* name;
  std::function<void(ScenarioConfig&, Deferred&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

// Plain scalar stored as value * scale.
template <typename Access>
Key scalar(const char* section, const char* name, double scale, Access access) {
  return {section, name,
          [access, scale](ScenarioConfig& c, Deferred&, const std::string& v) {
            access(c) = csv::parse_number(v) * scale;
          },
          [access, scale](const ScenarioConfig& c) {
            return csv::format_number(access(c) / scale);
          }};
}

const std::vector<Key>& keys() {
  using C = ScenarioConfig;
  static const std::vector<Key> table = {
      // [robot]
      scalar("robot", "hub_radius_mm", kMm, [](auto& c) -> auto& { return c.robot.hub_radius; }),
      scalar("robot", "wheel_radius_mm", kMm, [](auto& c) -> auto& { return c.robot.wheel_radius; }),
      scalar("robot", "net_weight_N", 1.0, [](auto& c) -> auto& { return c.robot.net_weight_N; }),
      scalar("robot", "hemisphere_mass_kg", 1.0, [](auto& c) -> auto& { return c.robot.hemisphere_mass; }),
      scalar("robot", "hemisphere_radius_mm", kMm, [](auto& c) -> auto& { return c.robot.hemisphere_radius; }),
      scalar("robot", "box_mass_kg", 1.0, [](auto& c) -> auto& { return c.robot.box_mass; }),
      scalar("robot", "box_length_mm", kMm, [](auto& c) -> auto& { return c.robot.box_size.x(); }),
      scalar("robot", "box_width_mm", kMm, [](auto& c) -> auto& { return c.robot.box_size.y(); }),
      scalar("robot", "box_height_mm", kMm, [](auto& c) -> auto& { return c.robot.box_size.z(); }),
      scalar("robot", "box_drop_mm", kMm, [](auto& c) -> auto& { return c.robot.box_drop; }),
      scalar("robot", "arm_rod_radius_mm", kMm, [](auto& c) -> auto& { return c.robot.arm_rod_radius; }),
      scalar("robot", "motor_torque_Nmm", kMm, [](auto& c) -> auto& { return c.robot.motor.nominal_torque_Nm; }),
      scalar("robot", "gear_ratio", 1.0, [](auto& c) -> auto& { return c.robot.motor.reduction_ratio; }),
      scalar("robot", "torque_constant_mNm_per_A", 1e-3, [](auto& c) -> auto& { return c.robot.motor.torque_constant_Nm_per_A; }),
      scalar("robot", "gear_efficiency", 1.0, [](auto& c) -> auto& { return c.robot.motor.efficiency; }),
      scalar("robot", "wall_stiffness_N_per_mm", 1.0 / kMm, [](auto& c) -> auto& { return c.robot.wall_stiffness; }),
      scalar("robot", "wall_damping_Ns_per_mm", 1.0 / kMm, [](auto& c) -> auto& { return c.robot.wall_damping; }),
      scalar("robot", "scrub_damping_Ns_per_mm", 1.0 / kMm, [](auto& c) -> auto& { return c.robot.scrub_damping; }),
      // [spring]
      scalar("spring", "lever_mm", 1.0, [](auto& c) -> auto& { return c.spring.lever_mm; }),
      scalar("spring", "arm_mm", 1.0, [](auto& c) -> auto& { return c.spring.arm_mm; }),
      scalar("spring", "stiffness_N_per_mm", 1.0, [](auto& c) -> auto& { return c.spring.stiffness_N_per_mm; }),
      scalar("spring", "arm_weight_N", 1.0, [](auto& c) -> auto& { return c.spring.arm_weight_N; }),
      scalar("spring", "total_weight_N", 1.0, [](auto& c) -> auto& { return c.spring.total_weight_N; }),
      // [pipe]
      scalar("pipe", "radius_mm", kMm, [](auto& c) -> auto& { return c.pipe.nominal_radius; }),
      scalar("pipe", "inclination_deg", kDeg, [](auto& c) -> auto& { return c.pipe.inclination; }),
      {"pipe", "obstacles",
       [](C& c, Deferred&, const std::string& v) { c.pipe.obstacles = parse_obstacles(v); },
       [](const C& c) { return format_obstacles(c.pipe.obstacles); }},
      // [drag]
      scalar("drag", "c0_N", 1.0, [](auto& c) -> auto& { return c.drag.c0; }),
      scalar("drag", "c2_Ns2_per_m2", 1.0, [](auto& c) -> auto& { return c.drag.c2; }),
      // [controller]
      {"controller", "q_diag",
       [](C& c, Deferred&, const std::string& v) { c.controller.q_diag = parse_vector(v); },
       [](const C& c) { return format_vector(c.controller.q_diag); }},
      {"controller", "r_diag",
       [](C& c, Deferred&, const std::string& v) { c.controller.r_diag = parse_vector(v); },
       [](const C& c) { return format_vector(c.controller.r_diag); }},
      {"controller", "i_trig_A",
       [](C&, Deferred& d, const std::string& v) { d.i_trig = csv::parse_number(v); },
       [](const C& c) { return csv::format_number(c.controller.supervisor.trigger_current_A); }},
      scalar("controller", "t_trig_s", 1.0, [](auto& c) -> auto& { return c.controller.supervisor.trigger_time_s; }),
      {"controller", "i_release_A",
       [](C&, Deferred& d, const std::string& v) { d.i_release = csv::parse_number(v); },
       [](const C& c) { return csv::format_number(c.controller.supervisor.release_current_A); }},
      scalar("controller", "t_release_s", 1.0, [](auto& c) -> auto& { return c.controller.supervisor.release_time_s; }),
      scalar("controller", "t_ramp_N_per_s", 1.0, [](auto& c) -> auto& { return c.controller.supervisor.ramp_rate_N_per_s; }),
      {"controller", "t_max_N",
       [](C&, Deferred& d, const std::string& v) { d.t_max = csv::parse_number(v); },
       [](const C& c) { return csv::format_number(c.controller.supervisor.max_tension_N); }},
      scalar("controller", "anchor_lever_mm", kMm, [](auto& c) -> auto& { return c.controller.anchor_lever; }),
      scalar("controller", "retract_target_N", 1.0, [](auto& c) -> auto& { return c.controller.supervisor.retract_target_N; }),
      {"controller", "supervisor",
       [](C& c, Deferred&, const std::string& v) { c.controller.supervisor_enabled = parse_switch(v); },
       [](const C& c) { return std::string(c.controller.supervisor_enabled ? "on" : "off"); }},
      scalar("controller", "max_lead_mm", kMm, [](auto& c) -> auto& { return c.controller.max_lead; }),
      // [sim]
      scalar("sim", "dt_s", 1.0, [](auto& c) -> auto& { return c.sim.dt; }),
      scalar("sim", "duration_s", 1.0, [](auto& c) -> auto& { return c.sim.duration; }),
      {"sim", "decimation",
       [](C& c, Deferred&, const std::string& v) {
         const double d = csv::parse_number(v);
         if (!(d >= 1.0 && d == std::floor(d) && d < 1e9)) {
           throw ValidationError("decimation must be a positive integer");
         }
         c.sim.decimation = static_cast<int>(d);
       },
       [](const C& c) { return std::to_string(c.sim.decimation); }},
      scalar("sim", "cruise_speed_mm_per_s", kMm, [](auto& c) -> auto& { return c.sim.cruise_speed; }),
      scalar("sim", "start_x_mm", kMm, [](auto& c) -> auto& { return c.sim.start_x; }),
      scalar("sim", "contact_loss_timeout_s", 1.0, [](auto& c) -> auto& { return c.sim.contact_loss_timeout; }),
  };
  return table;
}

void resolve(ScenarioConfig& c, const Deferred& d) {
  const GearMotor& m = c.robot.motor;
  ControllerParams& ctl = c.controller;
  ctl.supervisor.geometry = c.spring;
  m.validate();
  ctl.supervisor.trigger_current_A = d.i_trig.value_or(0.8 * m.rated_current_A());
  ctl.supervisor.release_current_A =
      d.i_release.value_or(0.4 * m.rated_current_A());
  ctl.supervisor.max_tension_N =
      d.t_max.value_or(default_max_tension(m, ctl.anchor_lever));
}

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig c;
  resolve(c, {});
  return c;
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(source + ": " + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
  }
  ScenarioConfig c;
  Deferred deferred;
  const std::set<std::string> sections = {"robot", "spring", "pipe",
                                          "drag",  "controller", "sim"};
  for (const auto& [section, body] : tree) {
    if (!sections.contains(section)) {
      throw ValidationError(source + ": unknown section [" + section + "]");
    }
    if (body.empty() && !body.data().empty()) {
      throw ValidationError(source + ": key '" + section +
                            "' outside any section");
    }
    for (const auto& [name, value] : body) {
      const auto& table = keys();
      const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) {
        return section == k.section && name == k.name;
      });
      if (it == table.end()) {
        throw ValidationError(source + ": unknown key '" + name +
                              "' in [" + section + "]");
      }
      try {
        it->set(c, deferred, trim(value.data()));
      } catch (const ValidationError& e) {
        throw ValidationError(source + ": [" + section + "] " + name + ": " +
                              e.what());
      }
    }
  }
  try {
    resolve(c, deferred);
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  if (path == "default") return default_config();
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void write_config(std::ostream& out, const ScenarioConfig& config) {
  std::string current;
  for (const Key& k : keys()) {
    if (current != k.section) {
      if (!current.empty()) out << '\n';
      current = k.section;
      out << '[' << current << "]\n";
    }
    out << k.name << " = " << k.get(config) << '\n';
  }
}

}  // namespace inpipe
