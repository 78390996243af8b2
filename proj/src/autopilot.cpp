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

#include "awe/autopilot.hpp"

#include <algorithm>
#include <cmath>

namespace awe {

void ControllerConfig::validate() const {
  auto require = [](bool ok, const char *key, const char *what) {
    if (!ok) throw ValidationError(key, what);
  };
  auto finite_pos = [&](double v, const char *key) {
    require(std::isfinite(v) && v > 0.0, key, "must be positive");
  };
  require(std::isfinite(roll_pole_1) && roll_pole_1 < 0.0, "roll_pole_1", "must be negative");
  require(std::isfinite(roll_pole_2) && roll_pole_2 < 0.0, "roll_pole_2", "must be negative");
  require(std::isfinite(pitch_pole_1) && pitch_pole_1 < 0.0, "pitch_pole_1", "must be negative");
  require(std::isfinite(pitch_pole_2) && pitch_pole_2 < 0.0, "pitch_pole_2", "must be negative");
  finite_pos(k_thrust, "K_m");
  finite_pos(k_course, "K_phi");
  finite_pos(k_altitude, "K_theta");
  // Inner loops must be faster than the outer loops they serve.
  require(std::abs(roll_pole_1) > k_course && std::abs(roll_pole_2) > k_course, "K_phi",
          "must be below the magnitude of both roll poles");
  require(std::abs(pitch_pole_1) > k_altitude && std::abs(pitch_pole_2) > k_altitude, "K_theta",
          "must be below the magnitude of both pitch poles");
  finite_pos(launch_accel_threshold, "launch_accel_threshold");
  finite_pos(takeoff_airspeed, "takeoff_airspeed");
  require(std::isfinite(takeoff_pitch), "takeoff_pitch", "must be finite");
  finite_pos(safe_altitude, "safe_altitude");
  finite_pos(min_turn_radius, "R_min");
  finite_pos(cruise_airspeed, "cruise_airspeed");
  require(std::isfinite(target_altitude) && target_altitude > safe_altitude, "target_altitude",
          "must exceed safe_altitude");
  require(target_1.finite(), "target_1", "must be finite");
  require(target_2.finite(), "target_2", "must be finite");
  finite_pos(switch_tolerance, "switch_tolerance");
  require(std::isfinite(takeoff_course), "takeoff_course", "must be finite");
  const double dir_x = std::cos(takeoff_course), dir_y = std::sin(takeoff_course);
  const double s1 = target_1.x * dir_x + target_1.y * dir_y;
  const double s2 = target_2.x * dir_x + target_2.y * dir_y;
  require(std::abs(s1 - s2) > 2.0 * switch_tolerance, "target_2",
          "targets must be separated along the take-off course by more than twice switch_tolerance");
  require(roll_limits.lower < 0.0 && roll_limits.upper > 0.0, "roll_limits", "must bracket zero");
  require(pitch_limits.lower < 0.0 && pitch_limits.upper > 0.0, "pitch_limits", "must bracket zero");
  require(thrust_limits.lower >= 0.0 && thrust_limits.upper > thrust_limits.lower, "thrust_limits",
          "must satisfy 0 <= lower < upper");
  require(station_position.finite(), "station_position", "must be finite");
  finite_pos(tether_max_length, "tether_max_length");
  require(std::isfinite(detach_margin) && detach_margin >= 0.0 && detach_margin < tether_max_length,
          "detach_margin", "must lie in [0, tether_max_length)");
  finite_pos(max_attitude, "max_attitude");
  finite_pos(max_airspeed, "max_airspeed");
  finite_pos(gravity, "gravity");
}

LoopGains gains_from_eigenvalues(double a, double b, std::complex<double> l1, std::complex<double> l2) {
  if (b == 0.0) throw ZeroGain("input gain b is zero; eigenvalues cannot be assigned");
  if (!(l1.real() < 0.0) || !(l2.real() < 0.0)) {
    throw UnstableRequest("requested eigenvalues must have negative real part");
  }
  const std::complex<double> sum = l1 + l2;
  const std::complex<double> product = l1 * l2;
  const double tol = 1e-12 * std::max(1.0, std::abs(product));
  if (std::abs(sum.imag()) > tol || std::abs(product.imag()) > tol) {
    throw Error("eigenvalues must be real or a complex-conjugate pair");
  }
  LoopGains g;
  g.k_error = product.real() / b;
  g.k_error_rate = (sum.real() - a) / (-b);
  return g;
}

std::array<double, 4> closed_loop_matrix(double a, double b, const LoopGains &gains) {
  return {0.0, 1.0, -b * gains.k_error, a - b * gains.k_error_rate};
}

std::array<std::complex<double>, 2> eigenvalues_2x2(const std::array<double, 4> &m) {
  const double trace = m[0] + m[3];
  const double det = m[0] * m[3] - m[1] * m[2];
  const double half = 0.5 * trace;
  const double disc = half * half - det;
  if (disc >= 0.0) {
    // Avoid cancellation: compute the larger-magnitude root first.
    const double root = std::sqrt(disc);
    const double big = half + (half >= 0.0 ? root : -root);
    const double small = big != 0.0 ? det / big : 0.0;
    std::array<std::complex<double>, 2> out{std::complex<double>(big), std::complex<double>(small)};
    if (out[0].real() > out[1].real()) std::swap(out[0], out[1]);
    return out;
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, -im), std::complex<double>(half, im)};
}

double attitude_loop(double ref, double ref_rate, double angle, double rate, const LoopGains &gains,
                     const InputLimits &limits) {
  const double u = gains.k_error * (ref - angle) + gains.k_error_rate * (ref_rate - rate);
  return clamp(u, limits.lower, limits.upper);
}

double roll_loop(double roll_ref, const Measurements &meas, const LoopGains &gains, const ControllerConfig &config) {
  return attitude_loop(roll_ref, 0.0, meas.roll, meas.roll_rate, gains, config.roll_limits);
}

double pitch_loop(double pitch_ref, const Measurements &meas, const LoopGains &gains,
                  const ControllerConfig &config) {
  return attitude_loop(pitch_ref, 0.0, meas.pitch, meas.pitch_rate, gains, config.pitch_limits);
}

double airspeed_loop(double airspeed_ref, double airspeed, const ControllerConfig &config) {
  const double u = config.k_thrust * (airspeed_ref * airspeed_ref - airspeed * airspeed);
  return clamp(u, config.thrust_limits.lower, config.thrust_limits.upper);
}

double airspeed_closed_loop_steady_state(double airspeed_ref, double k_thrust, double drag_factor,
                                         double disturbance_force) {
  const double denom = k_thrust + drag_factor;
  return std::sqrt(std::max(0.0, (k_thrust * airspeed_ref * airspeed_ref + disturbance_force) / denom));
}

bool detect_launch(double forward_accel, const ControllerConfig &config) {
  return forward_accel >= config.launch_accel_threshold;
}

double course_angle(double vx, double vy) { return std::atan2(vy, vx); }

double max_roll_ref(double ground_speed, const ControllerConfig &config) {
  return ground_speed * ground_speed / (config.gravity * config.min_turn_radius);
}

double roll_ref_from_course_error(double course_error, double ground_speed, const ControllerConfig &config) {
  if (!(ground_speed > kMinGroundSpeed)) throw DegenerateSpeed(ground_speed);
  const double bound = max_roll_ref(ground_speed, config);
  return clamp(config.k_course * ground_speed / config.gravity * course_error, -bound, bound);
}

double course_hold_roll_ref(double course_ref, double course, double ground_speed,
                            const ControllerConfig &config) {
  return roll_ref_from_course_error(wrap_angle(course_ref - course), ground_speed, config);
}

double target_course_ref(const Vec3 &aircraft, const Vec3 &target) {
  return std::atan2(target.y - aircraft.y, target.x - aircraft.x);
}

namespace {

double along_takeoff(const Vec3 &p, const ControllerConfig &config) {
  return p.x * std::cos(config.takeoff_course) + p.y * std::sin(config.takeoff_course);
}

const Vec3 &target_point(Target t, const ControllerConfig &config) {
  return t == Target::kFirst ? config.target_1 : config.target_2;
}

// Turn sense after passing `reached`: loop on the side of the target line
// away from the ground station, which alternates the sense at the two ends.
int eight_turn_direction(Target reached, const ControllerConfig &config) {
  const Vec3 &here = target_point(reached, config);
  const Vec3 &other = target_point(reached == Target::kFirst ? Target::kSecond : Target::kFirst, config);
  const double ux = here.x - other.x, uy = here.y - other.y;
  const double sx = config.station_position.x - other.x, sy = config.station_position.y - other.y;
  const double side = ux * sy - uy * sx;  // > 0: station left of the inbound track
  return side > 0.0 ? -1 : 1;
}

}  // namespace

Target switch_target(const Vec3 &aircraft, Target active, const ControllerConfig &config) {
  const double s = along_takeoff(aircraft, config);
  const double s1 = along_takeoff(config.target_1, config);
  const double s2 = along_takeoff(config.target_2, config);
  const Target high = s1 >= s2 ? Target::kFirst : Target::kSecond;
  const Target low = s1 >= s2 ? Target::kSecond : Target::kFirst;
  const double s_high = std::max(s1, s2), s_low = std::min(s1, s2);
  if (s < s_low + config.switch_tolerance) return high;
  if (s > s_high - config.switch_tolerance) return low;
  return active;
}

double altitude_pitch_ref(double altitude_ref, double altitude, double ground_speed, const ControllerConfig &config) {
  if (!(ground_speed > kMinGroundSpeed)) throw DegenerateSpeed(ground_speed);
  return config.k_altitude / ground_speed * (altitude_ref - altitude);
}

std::string to_string(FlightMode mode) {
  switch (mode) {
    case FlightMode::kOnSlide: return "on_slide";
    case FlightMode::kClimbOut: return "climb_out";
    case FlightMode::kFigureEight: return "figure_eight";
  }
  return "unknown";
}

std::string to_string(SafetyStatus status) {
  switch (status) {
    case SafetyStatus::kOk: return "ok";
    case SafetyStatus::kTetherDetach: return "tether_detach";
    case SafetyStatus::kSensorFault: return "sensor_fault";
  }
  return "unknown";
}

PhaseOutput phase_step(const FlightPhase &phase, const Measurements &meas, const ControllerConfig &config) {
  PhaseOutput out;
  out.phase = phase;
  FlightPhase &next = out.phase;

  const double horizontal = meas.velocity.norm_xy();
  const double course = horizontal > kMinGroundSpeed ? course_angle(meas.velocity.x, meas.velocity.y)
                                                     : (phase.mode == FlightMode::kOnSlide ? config.takeoff_course
                                                                                            : phase.last_course);
  next.last_course = course;
  const double ground_speed = meas.velocity.norm();
  const bool speed_ok = ground_speed > kMinGroundSpeed;

  if (next.mode == FlightMode::kOnSlide) {
    if (!detect_launch(meas.forward_accel, config)) {
      out.refs.course = config.takeoff_course;
      return out;
    }
    next.mode = FlightMode::kClimbOut;
  }

  if (next.mode == FlightMode::kClimbOut && meas.position.z >= config.safe_altitude) {
    next.mode = FlightMode::kFigureEight;
    const double d1 = (config.target_1 - meas.position).norm_xy();
    const double d2 = (config.target_2 - meas.position).norm_xy();
    next.active_target = d2 > d1 ? Target::kSecond : Target::kFirst;
    next.turn_direction = 0;
  }

  out.controls_active = true;
  References &refs = out.refs;

  if (next.mode == FlightMode::kClimbOut) {
    refs.course = config.takeoff_course;
    refs.course_error = wrap_angle(refs.course - course);
    refs.roll = speed_ok ? roll_ref_from_course_error(refs.course_error, ground_speed, config) : 0.0;
    refs.pitch = config.takeoff_pitch;
    refs.airspeed = config.takeoff_airspeed;
    return out;
  }

  const Target previous = next.active_target;
  next.active_target = switch_target(meas.position, previous, config);
  if (next.active_target != previous && config.turn_policy == TurnPolicy::kEight) {
    next.turn_direction = eight_turn_direction(previous, config);
  }

  const Vec3 &target = target_point(next.active_target, config);
  refs.course = target_course_ref(meas.position, target);
  double error = wrap_angle(refs.course - course);
  if (next.turn_direction != 0) {
    // Keep turning in the latched sense until the shortest way agrees with it.
    if (error * next.turn_direction >= 0.0 || std::abs(error) < 0.5 * kPi) {
      next.turn_direction = 0;
    } else {
      error += 2.0 * kPi * next.turn_direction;
    }
  }
  refs.course_error = error;
  refs.roll = speed_ok ? roll_ref_from_course_error(error, ground_speed, config) : 0.0;
  refs.pitch = speed_ok ? altitude_pitch_ref(config.target_altitude, meas.position.z, ground_speed, config) : 0.0;
  refs.airspeed = config.cruise_airspeed;
  return out;
}

SafetyStatus safety_checks(const Measurements &meas, const ControllerConfig &config) {
  const bool finite = meas.position.finite() && meas.velocity.finite() && std::isfinite(meas.roll) &&
                      std::isfinite(meas.roll_rate) && std::isfinite(meas.pitch) &&
                      std::isfinite(meas.pitch_rate) && std::isfinite(meas.airspeed) &&
                      std::isfinite(meas.forward_accel);
  if (!finite) return SafetyStatus::kSensorFault;
  if (std::abs(meas.roll) > config.max_attitude || std::abs(meas.pitch) > config.max_attitude ||
      meas.airspeed < 0.0 || meas.airspeed > config.max_airspeed) {
    return SafetyStatus::kSensorFault;
  }
  const double distance = (meas.position - config.station_position).norm();
  if (distance >= config.tether_max_length - config.detach_margin) return SafetyStatus::kTetherDetach;
  return SafetyStatus::kOk;
}

Autopilot::Autopilot(const ControllerConfig &config, double a_roll, double b_roll, double a_pitch, double b_pitch)
    : config_(config),
      roll_gains_(gains_from_eigenvalues(a_roll, b_roll, config.roll_pole_1, config.roll_pole_2)),
      pitch_gains_(gains_from_eigenvalues(a_pitch, b_pitch, config.pitch_pole_1, config.pitch_pole_2)) {
  phase_.last_course = config.takeoff_course;
}

AutopilotOutput Autopilot::step(const Measurements &meas) {
  const PhaseOutput p = phase_step(phase_, meas, config_);
  phase_ = p.phase;
  AutopilotOutput out;
  out.refs = p.refs;
  out.phase = p.phase;
  if (p.controls_active) {
    out.inputs.roll = roll_loop(p.refs.roll, meas, roll_gains_, config_);
    out.inputs.pitch = pitch_loop(p.refs.pitch, meas, pitch_gains_, config_);
    out.inputs.thrust = airspeed_loop(p.refs.airspeed, meas.airspeed, config_);
  }
  return out;
}

}  // namespace awe
