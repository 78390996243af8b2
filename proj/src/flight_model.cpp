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

#include "awe/flight_model.hpp"

#include <algorithm>
#include <cmath>

namespace awe {

void AttitudeModelParams::validate() const {
  auto require = [](bool ok, const char *key, const char *what) {
    if (!ok) throw ValidationError(key, what);
  };
  require(std::isfinite(a_roll) && a_roll < 0.0, "a_roll", "must be negative (stable rate dynamics)");
  require(std::isfinite(a_pitch) && a_pitch < 0.0, "a_pitch", "must be negative (stable rate dynamics)");
  require(std::isfinite(b_roll) && b_roll > 0.0, "b_roll", "must be positive");
  require(std::isfinite(b_pitch) && b_pitch > 0.0, "b_pitch", "must be positive");
  require(std::isfinite(drag_coeff) && drag_coeff >= 0.0, "drag_coeff", "must be non-negative");
  require(std::isfinite(air_density) && air_density > 0.0, "air_density", "must be positive");
  require(std::isfinite(ref_area) && ref_area > 0.0, "ref_area", "must be positive");
  require(std::isfinite(mass) && mass > 0.0, "mass", "must be positive");
  require(std::isfinite(gravity) && gravity > 0.0, "gravity", "must be positive");
  require(std::isfinite(stall_warning_speed) && stall_warning_speed >= 0.0, "stall_warning_speed",
          "must be non-negative");
}

double roll_acceleration(const AircraftState &state, double u_roll, const AttitudeModelParams &params,
                         double d_roll) {
  return params.a_roll * state.roll_rate + params.b_roll * u_roll + d_roll;
}

double pitch_acceleration(const AircraftState &state, double u_pitch, const AttitudeModelParams &params,
                          double d_pitch) {
  return params.a_pitch * state.pitch_rate + params.b_pitch * u_pitch + d_pitch;
}

double turn_rate(const AircraftState &state, const AttitudeModelParams &params) {
  if (!(state.ground_speed > kMinGroundSpeed)) throw DegenerateSpeed(state.ground_speed);
  return params.gravity / state.ground_speed * state.roll;
}

double curvature(const AircraftState &state, const AttitudeModelParams &params) {
  if (!(state.ground_speed > kMinGroundSpeed)) throw DegenerateSpeed(state.ground_speed);
  return params.gravity * state.roll / (state.ground_speed * state.ground_speed);
}

double vertical_rate(const AircraftState &state) { return state.ground_speed * state.pitch; }

double airspeed_derivative(const AircraftState &state, double u_thrust, const AttitudeModelParams &params,
                           double d_force, double tether_force) {
  const double v = state.airspeed;
  const double drag = params.drag_factor() * v * v;
  const double climb = params.mass * params.gravity * std::sin(state.pitch);
  return (u_thrust - drag - climb - tether_force + d_force) / params.mass;
}

GroundVelocity kinematics_step(const AircraftState &state, const Vec3 &wind) {
  const double horizontal = state.airspeed * std::cos(state.pitch);
  GroundVelocity v;
  v.x = horizontal * std::cos(state.course) + wind.x;
  v.y = horizontal * std::sin(state.course) + wind.y;
  v.z = state.airspeed * std::sin(state.pitch) + wind.z;
  v.norm = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  return v;
}

PlantDerivative plant_derivative(const AircraftState &state, const PlantInputs &inputs,
                                 const AttitudeModelParams &params, const Vec3 &wind,
                                 const DisturbanceInputs &dist) {
  const GroundVelocity vel = kinematics_step(state, wind);
  PlantDerivative d;
  d.position = vel.vec();
  // Below the minimum ground speed the aircraft does not turn.
  d.course = vel.norm > kMinGroundSpeed ? params.gravity / vel.norm * state.roll : 0.0;
  d.roll = state.roll_rate;
  d.roll_rate = roll_acceleration(state, inputs.u_roll, params, dist.d_roll);
  d.pitch = state.pitch_rate;
  d.pitch_rate = pitch_acceleration(state, inputs.u_pitch, params, dist.d_pitch);
  d.airspeed = airspeed_derivative(state, inputs.u_thrust, params, dist.d_airspeed_force, dist.tether_force);
  if (state.airspeed <= 0.0 && d.airspeed < 0.0) d.airspeed = 0.0;
  return d;
}

AircraftState advance(const AircraftState &state, const PlantDerivative &deriv, double h, const Vec3 &wind) {
  AircraftState next = state;
  next.position += deriv.position * h;
  if (next.position.z < 0.0) next.position.z = 0.0;  // ground
  next.course = wrap_angle(state.course + deriv.course * h);
  next.roll = state.roll + deriv.roll * h;
  next.roll_rate = state.roll_rate + deriv.roll_rate * h;
  next.pitch = state.pitch + deriv.pitch * h;
  next.pitch_rate = state.pitch_rate + deriv.pitch_rate * h;
  next.airspeed = std::max(0.0, state.airspeed + deriv.airspeed * h);
  const GroundVelocity vel = kinematics_step(next, wind);
  next.velocity = vel.vec();
  next.ground_speed = vel.norm;
  return next;
}

AircraftState integrate_plant(const AircraftState &state, const PlantInputs &inputs,
                              const AttitudeModelParams &params, const Vec3 &wind,
                              const DisturbanceInputs &dist, double dt, Integrator method) {
  const PlantDerivative k1 = plant_derivative(state, inputs, params, wind, dist);
  if (method == Integrator::kEuler) return advance(state, k1, dt, wind);

  const PlantDerivative k2 = plant_derivative(advance(state, k1, 0.5 * dt, wind), inputs, params, wind, dist);
  const PlantDerivative k3 = plant_derivative(advance(state, k2, 0.5 * dt, wind), inputs, params, wind, dist);
  const PlantDerivative k4 = plant_derivative(advance(state, k3, dt, wind), inputs, params, wind, dist);

  auto combine = [](double a, double b, double c, double e) { return (a + 2.0 * b + 2.0 * c + e) / 6.0; };
  PlantDerivative avg;
  avg.position = (k1.position + k2.position * 2.0 + k3.position * 2.0 + k4.position) * (1.0 / 6.0);
  avg.course = combine(k1.course, k2.course, k3.course, k4.course);
  avg.roll = combine(k1.roll, k2.roll, k3.roll, k4.roll);
  avg.roll_rate = combine(k1.roll_rate, k2.roll_rate, k3.roll_rate, k4.roll_rate);
  avg.pitch = combine(k1.pitch, k2.pitch, k3.pitch, k4.pitch);
  avg.pitch_rate = combine(k1.pitch_rate, k2.pitch_rate, k3.pitch_rate, k4.pitch_rate);
  avg.airspeed = combine(k1.airspeed, k2.airspeed, k3.airspeed, k4.airspeed);
  return advance(state, avg, dt, wind);
}

}  // namespace awe
