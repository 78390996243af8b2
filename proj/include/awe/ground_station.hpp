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

// Ground station: linear slide launcher, spring-pulley tether coupling and a
// winch whose reference speed is driven only by the measured spring
// compression. Nothing in this module reads autopilot or aircraft-internal
// quantities; the aircraft enters solely through the tether geometry.
//
// All winch speeds are tether linear speeds [m/s], positive when reeling out.

#pragma once

#include "awe/common.hpp"

namespace awe {

struct GroundStationParams {
  double spring_stiffness = 60.0;       // k_s [N/m]
  double spring_max_compression = 0.32; // [m]
  double rail_length = 4.5;             // [m]
  double slide_mass = 9.0;              // [kg]
  double tether_max_length = 150.0;     // [m]
  double winch_drum_radius = 0.1;       // [m], unit conversion only

  // Spring travel zones: reel-in below zone_low, hold between, reel-out above
  // zone_high. The anchors scale the reference acceleration in each zone.
  double zone_low = 0.05;          // x_s^I
  double zone_high = 0.15;         // x_s^II
  double zone_low_anchor = 0.025;  // x_s^{I,a}
  double zone_high_anchor = 0.235; // x_s^{II,c}

  double min_ref_speed = -4.0;   // [m/s]
  double max_ref_speed = 40.0;   // [m/s]
  double reel_in_accel = -8.0;   // [m/s^2 per unit scaled compression]
  double reel_out_accel = 3000.0;  // [m/s^2 per unit scaled compression]
  double winch_time_constant = 0.05;  // tau_w [s]
  double winch_max_accel = 1000.0;   // torque-limited speed change [m/s^2]
  double control_period = 0.02;      // T_s [s]

  // Slide launch profile.
  double slide_peak_accel = 40.0;    // [m/s^2]
  double slide_jerk_time = 0.1;      // ramp from zero to peak [s]
  double release_speed = 9.0;        // [m/s]
  double slide_brake_decel = 20.0;   // [m/s^2]
  double launch_time = 1.0;          // slide start [s]
  double initial_slack = 2.0;        // unreeled tether at rest [m]

  // Penalty stiffness multiplier beyond full spring compression.
  double overcompression_factor = 100.0;

  void validate() const;
};

struct GroundStationState {
  double unreeled_length = 0.0;  // L_t [m]
  double winch_speed = 0.0;      // [m/s]
  double winch_ref_speed = 0.0;  // [m/s]
  double spring_compression = 0.0;  // [m]
  double slide_position = 0.0;   // [m]
  double slide_speed = 0.0;      // [m/s]
  double slack_length = 0.0;     // [m]
  double tether_force = 0.0;     // [N]
  bool launch_active = true;
  bool slide_attached = true;
  bool tether_end_reached = false;
};

/// Zone-based integral law for the winch reference speed. Throws
/// OutOfRangeCompression if compression is outside [0, spring_max_compression].
double winch_reference_speed(double compression, double prev_ref, const GroundStationParams &params);

struct WinchUpdate {
  double winch_speed = 0.0;
  double unreeled_length = 0.0;
  bool tether_end_reached = false;
};

/// First-order tracking of the reference with a speed-change limit; the
/// unreeled length integrates the new speed and is clipped to the drum.
WinchUpdate winch_track(const GroundStationState &state, const GroundStationParams &params, double dt);

struct TetherGeometry {
  double distance = 0.0;
  double slack_length = 0.0;
  double spring_compression = 0.0;
  double tether_force = 0.0;
};

TetherGeometry tether_geometry(const Vec3 &aircraft_position, const Vec3 &station_origin,
                               const GroundStationState &state, const GroundStationParams &params);

struct SlideSample {
  double accel = 0.0;     // [m/s^2]
  double speed = 0.0;     // [m/s]
  double position = 0.0;  // [m]
  bool attached = true;
};

/// Jerk-limited trapezoidal launch profile, t measured from slide start.
/// The aircraft detaches when the slide reaches the release speed; the slide
/// then brakes to rest.
SlideSample slide_profile(double t, const GroundStationParams &params);

/// Time from slide start at which the aircraft detaches [s].
double slide_release_time(const GroundStationParams &params);

/// Discrete ground-station controller and mechanics, stepped at the control
/// period.
class GroundStation {
 public:
  GroundStation(GroundStationParams params, Vec3 origin, double rail_heading);

  const GroundStationState &state() const { return state_; }
  const GroundStationParams &params() const { return params_; }
  const Vec3 &origin() const { return origin_; }

  /// Point on the rail occupied by the slide.
  Vec3 slide_point() const;

  /// Measures the tether geometry against the aircraft position at time t,
  /// updates the winch reference and advances winch and slide by dt.
  /// Returns the tether geometry used for this tick.
  TetherGeometry step(double t, const Vec3 &aircraft_position, double dt);

  /// Drops the tether coupling (automatic detach). Geometry reports slack
  /// zero force afterward.
  void release_tether() { tether_connected_ = false; }
  bool tether_connected() const { return tether_connected_; }

 private:
  GroundStationParams params_;
  Vec3 origin_;
  double rail_heading_;
  GroundStationState state_;
  bool tether_connected_ = true;
};

}  // namespace awe
