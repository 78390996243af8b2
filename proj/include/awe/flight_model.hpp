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

// Reduced aircraft model: first-order roll and pitch rate dynamics driven by
// the aileron and elevator inputs, a lift-equilibrium turn model, small-angle
// vertical kinematics and a thrust/drag airspeed balance. The same equations
// serve as the simulation plant and as the controller design model.

#pragma once

#include "awe/common.hpp"

namespace awe {

/// Identified attitude parameters plus the drag and mass data of the glider.
struct AttitudeModelParams {
  double a_roll = -2.3;    // [1/s]
  double b_roll = 12.6;    // [1/s^2]
  double a_pitch = -4.65;  // [1/s]
  double b_pitch = 30.0;   // [1/s^2]
  double drag_coeff = 0.05;
  double air_density = 1.2;  // [kg/m^3]
  double ref_area = 0.3;     // [m^2]
  double mass = 1.2;         // [kg]
  double gravity = 9.81;     // [m/s^2]
  // Logged only; the model has no stall.
  double stall_warning_speed = 7.0;  // [m/s]

  /// Throws ValidationError naming the offending field.
  void validate() const;

  /// 0.5 * rho * A * C_D [kg/m].
  double drag_factor() const { return 0.5 * air_density * ref_area * drag_coeff; }
};

/// Aircraft state in the inertial frame (X, Y, Z up).
///
/// `course` is the direction of the air-relative horizontal velocity; in still
/// air it coincides with the course angle of the ground velocity.
struct AircraftState {
  Vec3 position;
  Vec3 velocity;              // ground velocity, derived by kinematics_step
  double ground_speed = 0.0;  // |velocity|
  double course = 0.0;        // (-pi, pi]
  double roll = 0.0;
  double roll_rate = 0.0;
  double pitch = 0.0;
  double pitch_rate = 0.0;
  double airspeed = 0.0;  // >= 0
};

struct GustModel {
  double amplitude = 0.0;  // sinusoidal component [m/s]
  double period = 10.0;    // [s]
  double noise_std = 0.0;  // band-limited noise component [m/s]
  double noise_cutoff = 0.5;  // first-order noise bandwidth [Hz]
  unsigned long long seed = 0;
};

struct WindVector {
  Vec3 mean;  // W_Z is zero unless explicitly configured
  GustModel gust;
};

struct DisturbanceInputs {
  double d_roll = 0.0;           // [rad/s^2]
  double d_pitch = 0.0;          // [rad/s^2]
  double d_airspeed_force = 0.0; // [N]
  double tether_force = 0.0;     // [N], retarding, >= 0
};

struct GroundVelocity {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double norm = 0.0;

  Vec3 vec() const { return {x, y, z}; }
};

/// Roll acceleration a_roll * roll_rate + b_roll * u + d.
double roll_acceleration(const AircraftState &state, double u_roll, const AttitudeModelParams &params,
                         double d_roll);

double pitch_acceleration(const AircraftState &state, double u_pitch, const AttitudeModelParams &params,
                          double d_pitch);

/// Yaw rate (g / |p_dot|) * roll of a level coordinated turn. Throws
/// DegenerateSpeed when |p_dot| <= kMinGroundSpeed.
double turn_rate(const AircraftState &state, const AttitudeModelParams &params);

/// Path curvature 1/R = g * roll / |p_dot|^2. Same precondition as turn_rate.
double curvature(const AircraftState &state, const AttitudeModelParams &params);

/// Small-angle vertical speed |p_dot| * pitch (trim pitch zero).
double vertical_rate(const AircraftState &state);

/// Along-track acceleration from thrust, quadratic drag, the gravity component
/// along the climb path and a drag-aligned tether pull.
double airspeed_derivative(const AircraftState &state, double u_thrust, const AttitudeModelParams &params,
                           double d_force, double tether_force);

/// Ground velocity from airspeed, pitch, course and wind.
GroundVelocity kinematics_step(const AircraftState &state, const Vec3 &wind);

struct PlantInputs {
  double u_roll = 0.0;
  double u_pitch = 0.0;
  double u_thrust = 0.0;
};

/// Time derivative of the continuous plant state.
struct PlantDerivative {
  Vec3 position;
  double course = 0.0;
  double roll = 0.0;
  double roll_rate = 0.0;
  double pitch = 0.0;
  double pitch_rate = 0.0;
  double airspeed = 0.0;
};

PlantDerivative plant_derivative(const AircraftState &state, const PlantInputs &inputs,
                                 const AttitudeModelParams &params, const Vec3 &wind,
                                 const DisturbanceInputs &dist);

/// state + h * deriv, with course wrapped, airspeed clipped at zero and the
/// derived velocity fields refreshed.
AircraftState advance(const AircraftState &state, const PlantDerivative &deriv, double h, const Vec3 &wind);

enum class Integrator { kEuler, kRk4 };

/// Integrates the plant over one step with inputs, wind and disturbances held.
AircraftState integrate_plant(const AircraftState &state, const PlantInputs &inputs,
                              const AttitudeModelParams &params, const Vec3 &wind,
                              const DisturbanceInputs &dist, double dt, Integrator method);

}  // namespace awe
