// Copyright 2026 The awe-takeoff Authors
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

#include "awe/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace awe {

void SimConfig::validate() const {
  auto require = [](bool ok, const char *key, const char *what) {
    if (!ok) throw ValidationError(key, what);
  };
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
  require(std::isfinite(control_period) && control_period > 0.0, "control_period", "must be positive");
  const double ratio = control_period / dt;
  require(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio && std::round(ratio) >= 1.0, "dt",
          "must divide control_period into a whole number of steps");
  require(std::isfinite(duration) && duration >= dt, "duration", "must be at least dt");
  require(decimation >= 1, "decimation", "must be at least 1");
  require(std::isfinite(noise.attitude_std) && noise.attitude_std >= 0.0, "noise_attitude_std",
          "must be non-negative");
  require(std::isfinite(noise.rate_std) && noise.rate_std >= 0.0, "noise_rate_std", "must be non-negative");
  require(std::isfinite(noise.position_std) && noise.position_std >= 0.0, "noise_position_std",
          "must be non-negative");
  require(std::isfinite(noise.airspeed_std) && noise.airspeed_std >= 0.0, "noise_airspeed_std",
          "must be non-negative");
  require(std::isfinite(course_latch_noise) && course_latch_noise >= 0.0, "course_latch_noise",
          "must be non-negative");
  require(std::isfinite(settle_time) && settle_time >= 0.0, "settle_time", "must be non-negative");
}

int SimConfig::substeps() const { return static_cast<int>(std::lround(control_period / dt)); }

void DisturbanceConfig::validate() const {
  auto require = [](bool ok, const char *key, const char *what) {
    if (!ok) throw ValidationError(key, what);
  };
  auto non_negative = [&](double v, const char *key) {
    require(std::isfinite(v) && v >= 0.0, key, "must be non-negative");
  };
  non_negative(roll_noise_std, "roll_noise_std");
  non_negative(pitch_noise_std, "pitch_noise_std");
  non_negative(airspeed_noise_std, "airspeed_noise_std");
  require(std::isfinite(noise_cutoff) && noise_cutoff > 0.0, "noise_cutoff", "must be positive");
  non_negative(impulse_start, "impulse_start");
  require(std::isfinite(impulse_gap_min) && impulse_gap_min > 0.0, "impulse_gap_min", "must be positive");
  require(std::isfinite(impulse_gap_max) && impulse_gap_max >= impulse_gap_min, "impulse_gap_max",
          "must be at least impulse_gap_min");
  require(std::isfinite(impulse_peak_min) && impulse_peak_min >= 0.0, "impulse_peak_min", "must be non-negative");
  require(std::isfinite(impulse_peak_max) && impulse_peak_max >= impulse_peak_min, "impulse_peak_max",
          "must be at least impulse_peak_min");
  require(std::isfinite(impulse_duration_min) && impulse_duration_min > 0.0, "impulse_duration_min",
          "must be positive");
  require(std::isfinite(impulse_duration_max) && impulse_duration_max >= impulse_duration_min,
          "impulse_duration_max", "must be at least impulse_duration_min");
  require(impulse_duration_max <= impulse_gap_min, "impulse_duration_max", "pulses must not overlap");
  require(std::isfinite(tether_pitch_coupling) && tether_pitch_coupling >= 0.0, "tether_pitch_coupling",
          "must be non-negative");
}

namespace {

template <typename F>
void with_section(const char *section, F &&check) {
  try {
    check();
  } catch (const ValidationError &e) {
    throw ValidationError(std::string(section) + "." + e.key(), e.reason());
  }
}

}  // namespace

void Scenario::validate() const {
  if (name.empty()) throw ValidationError("scenario.name", "must not be empty");
  if (!station_origin.finite()) throw ValidationError("scenario.station_origin", "must be finite");
  if (!std::isfinite(rail_heading)) throw ValidationError("scenario.rail_heading", "must be finite");
  with_section("model", [&] { model.validate(); });
  with_section("ground", [&] { ground.validate(); });
  with_section("controller", [&] { effective_controller().validate(); });
  with_section("sim", [&] { sim.validate(); });
  with_section("disturbance", [&] { disturbance.validate(); });
  if (!wind.mean.finite()) throw ValidationError("wind.mean", "must be finite");
  if (!(std::isfinite(wind.gust.amplitude) && wind.gust.amplitude >= 0.0)) {
    throw ValidationError("wind.gust_amplitude", "must be non-negative");
  }
  if (!(std::isfinite(wind.gust.period) && wind.gust.period > 0.0)) {
    throw ValidationError("wind.gust_period", "must be positive");
  }
  if (!(std::isfinite(wind.gust.noise_std) && wind.gust.noise_std >= 0.0)) {
    throw ValidationError("wind.gust_noise_std", "must be non-negative");
  }
  if (!(std::isfinite(wind.gust.noise_cutoff) && wind.gust.noise_cutoff > 0.0)) {
    throw ValidationError("wind.gust_noise_cutoff", "must be positive");
  }
  if (std::abs(ground.control_period - sim.control_period) > 1e-12) {
    throw ValidationError("ground.control_period", "must equal sim.control_period");
  }
}

ControllerConfig Scenario::effective_controller() const {
  ControllerConfig c = controller;
  c.takeoff_course = rail_heading;
  c.station_position = station_origin;
  c.tether_max_length = ground.tether_max_length;
  c.gravity = model.gravity;
  return c;
}

Scenario paper_nominal_scenario() { return Scenario{}; }

namespace {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string &text, const std::string &key) {
  double v = 0.0;
  const char *first = text.data();
  const char *last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string &text, const std::string &key, std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), key));
  if (out.size() != count) {
    throw ParseError(key + ": expected " + std::to_string(count) + " comma-separated numbers");
  }
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const Scenario &)> get;
  std::function<void(Scenario &, const std::string &)> set;
};

using DoubleRef = std::function<double &(Scenario &)>;

Field number(std::string key, DoubleRef ref) {
  return {key, [ref](const Scenario &s) { return format_number(ref(const_cast<Scenario &>(s))); },
          [ref, key](Scenario &s, const std::string &v) { ref(s) = parse_number(v, key); }};
}

Field vector3(std::string key, std::function<Vec3 &(Scenario &)> ref) {
  return {key,
          [ref](const Scenario &s) {
            const Vec3 &v = ref(const_cast<Scenario &>(s));
            return format_number(v.x) + ", " + format_number(v.y) + ", " + format_number(v.z);
          },
          [ref, key](Scenario &s, const std::string &v) {
            const auto xs = parse_list(v, key, 3);
            ref(s) = {xs[0], xs[1], xs[2]};
          }};
}

Field limits(std::string key, std::function<InputLimits &(Scenario &)> ref) {
  return {key,
          [ref](const Scenario &s) {
            const InputLimits &l = ref(const_cast<Scenario &>(s));
            return format_number(l.lower) + ", " + format_number(l.upper);
          },
          [ref, key](Scenario &s, const std::string &v) {
            const auto xs = parse_list(v, key, 2);
            ref(s) = {xs[0], xs[1]};
          }};
}

Field flag(std::string key, std::function<bool &(Scenario &)> ref) {
  return {key, [ref](const Scenario &s) { return std::string(ref(const_cast<Scenario &>(s)) ? "true" : "false"); },
          [ref, key](Scenario &s, const std::string &v) {
            if (v == "true") {
              ref(s) = true;
            } else if (v == "false") {
              ref(s) = false;
            } else {
              throw ParseError(key + ": expected true or false, got '" + v + "'");
            }
          }};
}

const std::vector<Field> &fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
#define AWE_NUM(key, expr) f.push_back(number(key, [](Scenario &s) -> double & { return expr; }))
    f.push_back({"scenario.name", [](const Scenario &s) { return s.name; },
                 [](Scenario &s, const std::string &v) { s.name = v; }});
    f.push_back(vector3("scenario.station_origin", [](Scenario &s) -> Vec3 & { return s.station_origin; }));
    AWE_NUM("scenario.rail_heading", s.rail_heading);

    AWE_NUM("model.a_roll", s.model.a_roll);
    AWE_NUM("model.b_roll", s.model.b_roll);
    AWE_NUM("model.a_pitch", s.model.a_pitch);
    AWE_NUM("model.b_pitch", s.model.b_pitch);
    AWE_NUM("model.drag_coeff", s.model.drag_coeff);
    AWE_NUM("model.air_density", s.model.air_density);
    AWE_NUM("model.ref_area", s.model.ref_area);
    AWE_NUM("model.mass", s.model.mass);
    AWE_NUM("model.gravity", s.model.gravity);
    AWE_NUM("model.stall_warning_speed", s.model.stall_warning_speed);

    AWE_NUM("ground.spring_stiffness", s.ground.spring_stiffness);
    AWE_NUM("ground.spring_max_compression", s.ground.spring_max_compression);
    AWE_NUM("ground.rail_length", s.ground.rail_length);
    AWE_NUM("ground.slide_mass", s.ground.slide_mass);
    AWE_NUM("ground.tether_max_length", s.ground.tether_max_length);
    AWE_NUM("ground.winch_drum_radius", s.ground.winch_drum_radius);
    AWE_NUM("ground.zone_low", s.ground.zone_low);
    AWE_NUM("ground.zone_high", s.ground.zone_high);
    AWE_NUM("ground.zone_low_anchor", s.ground.zone_low_anchor);
    AWE_NUM("ground.zone_high_anchor", s.ground.zone_high_anchor);
    AWE_NUM("ground.min_ref_speed", s.ground.min_ref_speed);
    AWE_NUM("ground.max_ref_speed", s.ground.max_ref_speed);
    AWE_NUM("ground.reel_in_accel", s.ground.reel_in_accel);
    AWE_NUM("ground.reel_out_accel", s.ground.reel_out_accel);
    AWE_NUM("ground.winch_time_constant", s.ground.winch_time_constant);
    AWE_NUM("ground.winch_max_accel", s.ground.winch_max_accel);
    AWE_NUM("ground.control_period", s.ground.control_period);
    AWE_NUM("ground.slide_peak_accel", s.ground.slide_peak_accel);
    AWE_NUM("ground.slide_jerk_time", s.ground.slide_jerk_time);
    AWE_NUM("ground.release_speed", s.ground.release_speed);
    AWE_NUM("ground.slide_brake_decel", s.ground.slide_brake_decel);
    AWE_NUM("ground.launch_time", s.ground.launch_time);
    AWE_NUM("ground.initial_slack", s.ground.initial_slack);
    AWE_NUM("ground.overcompression_factor", s.ground.overcompression_factor);

    AWE_NUM("controller.roll_pole_1", s.controller.roll_pole_1);
    AWE_NUM("controller.roll_pole_2", s.controller.roll_pole_2);
    AWE_NUM("controller.pitch_pole_1", s.controller.pitch_pole_1);
    AWE_NUM("controller.pitch_pole_2", s.controller.pitch_pole_2);
    AWE_NUM("controller.K_m", s.controller.k_thrust);
    AWE_NUM("controller.K_phi", s.controller.k_course);
    AWE_NUM("controller.K_theta", s.controller.k_altitude);
    AWE_NUM("controller.launch_accel_threshold", s.controller.launch_accel_threshold);
    AWE_NUM("controller.takeoff_airspeed", s.controller.takeoff_airspeed);
    AWE_NUM("controller.takeoff_pitch", s.controller.takeoff_pitch);
    AWE_NUM("controller.safe_altitude", s.controller.safe_altitude);
    AWE_NUM("controller.R_min", s.controller.min_turn_radius);
    AWE_NUM("controller.cruise_airspeed", s.controller.cruise_airspeed);
    AWE_NUM("controller.target_altitude", s.controller.target_altitude);
    f.push_back(vector3("controller.target_1", [](Scenario &s) -> Vec3 & { return s.controller.target_1; }));
    f.push_back(vector3("controller.target_2", [](Scenario &s) -> Vec3 & { return s.controller.target_2; }));
    AWE_NUM("controller.switch_tolerance", s.controller.switch_tolerance);
    f.push_back(limits("controller.roll_limits", [](Scenario &s) -> InputLimits & { return s.controller.roll_limits; }));
    f.push_back(
        limits("controller.pitch_limits", [](Scenario &s) -> InputLimits & { return s.controller.pitch_limits; }));
    f.push_back(
        limits("controller.thrust_limits", [](Scenario &s) -> InputLimits & { return s.controller.thrust_limits; }));
    f.push_back({"controller.turn_policy",
                 [](const Scenario &s) {
                   return std::string(s.controller.turn_policy == TurnPolicy::kEight ? "eight" : "shortest");
                 },
                 [](Scenario &s, const std::string &v) {
                   if (v == "eight") {
                     s.controller.turn_policy = TurnPolicy::kEight;
                   } else if (v == "shortest") {
                     s.controller.turn_policy = TurnPolicy::kShortest;
                   } else {
                     throw ParseError("controller.turn_policy: expected eight or shortest, got '" + v + "'");
                   }
                 }});
    AWE_NUM("controller.detach_margin", s.controller.detach_margin);
    AWE_NUM("controller.max_attitude", s.controller.max_attitude);
    AWE_NUM("controller.max_airspeed", s.controller.max_airspeed);

    AWE_NUM("sim.dt", s.sim.dt);
    AWE_NUM("sim.control_period", s.sim.control_period);
    AWE_NUM("sim.duration", s.sim.duration);
    f.push_back({"sim.integrator",
                 [](const Scenario &s) { return std::string(s.sim.integrator == Integrator::kRk4 ? "rk4" : "euler"); },
                 [](Scenario &s, const std::string &v) {
                   if (v == "rk4") {
                     s.sim.integrator = Integrator::kRk4;
                   } else if (v == "euler") {
                     s.sim.integrator = Integrator::kEuler;
                   } else {
                     throw ParseError("sim.integrator: expected rk4 or euler, got '" + v + "'");
                   }
                 }});
    f.push_back({"sim.seed", [](const Scenario &s) { return std::to_string(s.sim.seed); },
                 [](Scenario &s, const std::string &v) {
                   std::uint64_t seed = 0;
                   const auto res = std::from_chars(v.data(), v.data() + v.size(), seed);
                   if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
                     throw ParseError("sim.seed: expected a non-negative integer, got '" + v + "'");
                   }
                   s.sim.seed = seed;
                 }});
    f.push_back({"sim.decimation", [](const Scenario &s) { return std::to_string(s.sim.decimation); },
                 [](Scenario &s, const std::string &v) {
                   int d = 0;
                   const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
                   if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
                     throw ParseError("sim.decimation: expected an integer, got '" + v + "'");
                   }
                   s.sim.decimation = d;
                 }});
    f.push_back(flag("sim.noise", [](Scenario &s) -> bool & { return s.sim.noise.enabled; }));
    AWE_NUM("sim.noise_attitude_std", s.sim.noise.attitude_std);
    AWE_NUM("sim.noise_rate_std", s.sim.noise.rate_std);
    AWE_NUM("sim.noise_position_std", s.sim.noise.position_std);
    AWE_NUM("sim.noise_airspeed_std", s.sim.noise.airspeed_std);
    AWE_NUM("sim.course_latch_noise", s.sim.course_latch_noise);
    AWE_NUM("sim.settle_time", s.sim.settle_time);

    f.push_back(vector3("wind.mean", [](Scenario &s) -> Vec3 & { return s.wind.mean; }));
    AWE_NUM("wind.gust_amplitude", s.wind.gust.amplitude);
    AWE_NUM("wind.gust_period", s.wind.gust.period);
    AWE_NUM("wind.gust_noise_std", s.wind.gust.noise_std);
    AWE_NUM("wind.gust_noise_cutoff", s.wind.gust.noise_cutoff);

    AWE_NUM("disturbance.roll_noise_std", s.disturbance.roll_noise_std);
    AWE_NUM("disturbance.pitch_noise_std", s.disturbance.pitch_noise_std);
    AWE_NUM("disturbance.airspeed_noise_std", s.disturbance.airspeed_noise_std);
    AWE_NUM("disturbance.noise_cutoff", s.disturbance.noise_cutoff);
    f.push_back(flag("disturbance.forced_impulses", [](Scenario &s) -> bool & { return s.disturbance.forced_impulses; }));
    AWE_NUM("disturbance.impulse_start", s.disturbance.impulse_start);
    AWE_NUM("disturbance.impulse_gap_min", s.disturbance.impulse_gap_min);
    AWE_NUM("disturbance.impulse_gap_max", s.disturbance.impulse_gap_max);
    AWE_NUM("disturbance.impulse_peak_min", s.disturbance.impulse_peak_min);
    AWE_NUM("disturbance.impulse_peak_max", s.disturbance.impulse_peak_max);
    AWE_NUM("disturbance.impulse_duration_min", s.disturbance.impulse_duration_min);
    AWE_NUM("disturbance.impulse_duration_max", s.disturbance.impulse_duration_max);
    AWE_NUM("disturbance.tether_pitch_coupling", s.disturbance.tether_pitch_coupling);
#undef AWE_NUM
    return f;
  }();
  return table;
}

}  // namespace

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const Field &f : fields()) keys.push_back(f.key);
  return keys;
}

Scenario parse_scenario(const std::string &text) {
  std::map<std::string, const Field *> by_key;
  for (const Field &f : fields()) by_key[f.key] = &f;

  Scenario s = paper_nominal_scenario();
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    if (value.empty()) throw ParseError("line " + std::to_string(line_no) + ": missing value for '" + key + "'");
    it->second->set(s, value);
  }
  for (const Field &f : fields()) {
    if (!seen.count(f.key)) s.defaulted.push_back(f.key);
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario &scenario) {
  std::string out;
  std::string section;
  for (const Field &f : fields()) {
    const std::string sec = f.key.substr(0, f.key.find('.'));
    if (sec != section) {
      if (!section.empty()) out += "\n";
      section = sec;
    }
    out += f.key + " = " + f.get(scenario) + "\n";
  }
  return out;
}

}  // namespace awe
