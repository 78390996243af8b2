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

// Hierarchical onboard controller.
//
// Low level: static state feedback on roll and pitch (gains from pole
// placement) and a quadratic airspeed law for the thrust. High level: course
// hold through the roll reference, altitude hold through the pitch reference,
// and constant airspeed references, scheduled by a monotone phase machine
// (on slide -> climb-out -> figure-of-eight). All laws are static; the
// controller runs at the sampling rate under zero-order hold.

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "awe/common.hpp"

namespace awe {

struct LoopGains {
  double k_error = 0.0;       // K_e
  double k_error_rate = 0.0;  // K_e_dot
};

struct InputLimits {
  double lower = 0.0;
  double upper = 0.0;
};

enum class TurnPolicy {
  kShortest,  // plain course hold toward the active target
  kEight,     // after a target switch, turn away from the ground station
};

struct ControllerConfig {
  // Closed-loop eigenvalues of the roll and pitch error dynamics [1/s].
  double roll_pole_1 = -2.7;
  double roll_pole_2 = -3.1;
  double pitch_pole_1 = -2.7;
  double pitch_pole_2 = -3.1;

  double k_thrust = 0.5;   // K_m [kg/m]
  double k_course = 1.0;   // K_phi [1/s]
  double k_altitude = 0.1; // K_theta [1/s]

  double launch_accel_threshold = 20.0;  // [m/s^2]
  double takeoff_airspeed = 16.0;        // [m/s]
  double takeoff_pitch = 0.69;           // [rad]
  double safe_altitude = 20.0;           // [m]
  double min_turn_radius = 20.0;         // [m]
  double cruise_airspeed = 13.0;         // [m/s]
  double target_altitude = 50.0;         // [m]
  Vec3 target_1{30.0, 55.0, 50.0};       // p^I
  Vec3 target_2{-30.0, 40.0, 50.0};      // p^II
  double switch_tolerance = 0.5;         // delta_X [m]
  double takeoff_course = 0.0;           // gamma_ref,to [rad]

  InputLimits roll_limits{-0.34, 0.34};   // [rad]
  InputLimits pitch_limits{-0.34, 0.34};  // [rad]
  InputLimits thrust_limits{0.0, 20.0};   // [N]

  TurnPolicy turn_policy = TurnPolicy::kEight;
  Vec3 station_position{};  // fixed, known before launch

  // Safety.
  double tether_max_length = 150.0;  // [m]
  double detach_margin = 10.0;       // [m]
  double max_attitude = 1.6;         // [rad] sanity bound on roll/pitch
  double max_airspeed = 60.0;        // [m/s]

  double gravity = 9.81;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Low-level design and control laws
// ---------------------------------------------------------------------------

/// Gains placing the eigenvalues of [[0, 1], [-b K_e, a - b K_e_dot]] at
/// {l1, l2}. The poles must be real or a complex-conjugate pair with negative
/// real parts. Throws ZeroGain for b == 0 and UnstableRequest otherwise.
LoopGains gains_from_eigenvalues(double a, double b, std::complex<double> l1, std::complex<double> l2);

/// Closed-loop error-dynamics matrix for the given model and gains, row major.
std::array<double, 4> closed_loop_matrix(double a, double b, const LoopGains &gains);

/// Eigenvalues of a 2x2 matrix (row major), ordered by real part ascending.
std::array<std::complex<double>, 2> eigenvalues_2x2(const std::array<double, 4> &m);

/// K_e (ref - angle) + K_e_dot (ref_rate - rate), saturated.
double attitude_loop(double ref, double ref_rate, double angle, double rate, const LoopGains &gains,
                     const InputLimits &limits);

struct Measurements;

/// Roll loop with zero reference rate.
double roll_loop(double roll_ref, const Measurements &meas, const LoopGains &gains, const ControllerConfig &config);

double pitch_loop(double pitch_ref, const Measurements &meas, const LoopGains &gains, const ControllerConfig &config);

double airspeed_loop(double airspeed_ref, double airspeed, const ControllerConfig &config);

/// Steady airspeed of the quadratic thrust law against quadratic drag.
double airspeed_closed_loop_steady_state(double airspeed_ref, double k_thrust, double drag_factor,
                                         double disturbance_force = 0.0);

// ---------------------------------------------------------------------------
// High-level laws
// ---------------------------------------------------------------------------

bool detect_launch(double forward_accel, const ControllerConfig &config);

/// Four-quadrant direction of the horizontal ground velocity.
double course_angle(double vx, double vy);

/// Roll reference K_phi (|p_dot| / g) wrap(course_ref - course), clamped to
/// the minimum-radius bound. Throws DegenerateSpeed.
double course_hold_roll_ref(double course_ref, double course, double ground_speed,
                            const ControllerConfig &config);

/// Same law with an explicit (unwrapped) course error.
double roll_ref_from_course_error(double course_error, double ground_speed, const ControllerConfig &config);

/// Roll bound |p_dot|^2 / (g R_min).
double max_roll_ref(double ground_speed, const ControllerConfig &config);

/// Bearing of the target from the aircraft in the horizontal plane.
double target_course_ref(const Vec3 &aircraft, const Vec3 &target);

enum class Target { kFirst, kSecond };

/// Target switching on the projection along the take-off course, with
/// tolerance switch_tolerance.
Target switch_target(const Vec3 &aircraft, Target active, const ControllerConfig &config);

/// K_theta / |p_dot| (Z_ref - p_Z). Throws DegenerateSpeed.
double altitude_pitch_ref(double altitude_ref, double altitude, double ground_speed, const ControllerConfig &config);

// ---------------------------------------------------------------------------
// Phase machine
// ---------------------------------------------------------------------------

enum class FlightMode { kOnSlide = 0, kClimbOut = 1, kFigureEight = 2 };

std::string to_string(FlightMode mode);

struct FlightPhase {
  FlightMode mode = FlightMode::kOnSlide;
  Target active_target = Target::kFirst;
  int turn_direction = 0;  // latched turn sense after a switch: +1 left, -1 right, 0 none
  double last_course = 0.0;  // held when the ground speed is degenerate
};

/// Onboard measurements. The controller reads nothing else.
struct Measurements {
  Vec3 position;
  Vec3 velocity;
  double roll = 0.0;
  double roll_rate = 0.0;
  double pitch = 0.0;
  double pitch_rate = 0.0;
  double airspeed = 0.0;
  double forward_accel = 0.0;  // body-x acceleration
};

struct References {
  double roll = 0.0;
  double pitch = 0.0;
  double airspeed = 0.0;
  double course = 0.0;
  double course_error = 0.0;  // as fed to the roll-reference law
};

struct PhaseOutput {
  FlightPhase phase;
  References refs;
  bool controls_active = false;  // false on the slide: all inputs zero
};

PhaseOutput phase_step(const FlightPhase &phase, const Measurements &meas, const ControllerConfig &config);

enum class SafetyStatus { kOk, kTetherDetach, kSensorFault };

std::string to_string(SafetyStatus status);

SafetyStatus safety_checks(const Measurements &meas, const ControllerConfig &config);

struct ControlInputs {
  double roll = 0.0;    // u_phi [rad]
  double pitch = 0.0;   // u_theta [rad]
  double thrust = 0.0;  // u_m [N]
};

struct AutopilotOutput {
  ControlInputs inputs;
  References refs;
  FlightPhase phase;
};

/// Stateful wrapper: gains computed once from the model parameters, phase
/// carried between ticks.
class Autopilot {
 public:
  Autopilot(const ControllerConfig &config, double a_roll, double b_roll, double a_pitch, double b_pitch);

  AutopilotOutput step(const Measurements &meas);

  const FlightPhase &phase() const { return phase_; }
  const LoopGains &roll_gains() const { return roll_gains_; }
  const LoopGains &pitch_gains() const { return pitch_gains_; }
  const ControllerConfig &config() const { return config_; }

 private:
  ControllerConfig config_;
  LoopGains roll_gains_;
  LoopGains pitch_gains_;
  FlightPhase phase_;
};

}  // namespace awe
