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

// Scenario: every parameter block of a run, plus the flat text format
//
//   # comment
//   section.key = value
//
// Vectors are written as three comma-separated numbers. Keys missing from a
// file take their paper-nominal defaults and are listed in `defaulted`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "awe/autopilot.hpp"
#include "awe/common.hpp"
#include "awe/flight_model.hpp"
#include "awe/ground_station.hpp"

namespace awe {

/// Optional Gaussian measurement noise, off by default.
struct MeasurementNoise {
  bool enabled = false;
  double attitude_std = 0.5 * kPi / 180.0;  // [rad]
  double rate_std = 0.5 * kPi / 180.0;      // [rad/s]
  double position_std = 0.5;                // [m]
  double airspeed_std = 0.3;                // [m/s]
};

struct SimConfig {
  double dt = 0.02;              // plant integration step [s]
  double control_period = 0.02;  // controller and ground-station tick [s]
  double duration = 120.0;       // [s]
  Integrator integrator = Integrator::kRk4;
  std::uint64_t seed = 1;
  int decimation = 1;            // telemetry row every n ticks
  MeasurementNoise noise;
  double course_latch_noise = 0.0;  // std of the pre-launch take-off course estimate [rad]
  double settle_time = 40.0;        // metrics window starts this long after the transition [s]

  void validate() const;
  /// Plant steps per controller tick.
  int substeps() const;
};

/// Attitude noise, forced tether impulses and the tether-to-pitch coupling.
struct DisturbanceConfig {
  double roll_noise_std = 0.0;       // band-limited d_roll [rad/s^2]
  double pitch_noise_std = 0.0;      // band-limited d_pitch [rad/s^2]
  double airspeed_noise_std = 0.0;   // band-limited d_airspeed_force [N]
  double noise_cutoff = 1.0;         // [Hz]

  bool forced_impulses = false;
  double impulse_start = 30.0;       // first pulse no earlier than this [s]
  double impulse_gap_min = 3.0;      // spacing between pulse starts [s]
  double impulse_gap_max = 6.0;
  double impulse_peak_min = 3.0;     // [N]
  double impulse_peak_max = 8.0;
  double impulse_duration_min = 0.3; // [s]
  double impulse_duration_max = 0.7;

  // Nose-down pitch acceleration per newton of tether pull [rad/s^2/N].
  double tether_pitch_coupling = 0.1;

  void validate() const;
};

struct Scenario {
  std::string name = "paper-nominal";
  AttitudeModelParams model;
  GroundStationParams ground;
  ControllerConfig controller;  // takeoff_course and station_position are set from the fields below
  SimConfig sim;
  WindVector wind;
  DisturbanceConfig disturbance;
  Vec3 station_origin;
  double rail_heading = 0.0;  // gamma_to [rad]

  // Keys that were not present in the parsed text.
  std::vector<std::string> defaulted;

  /// Re-validates every block. Throws ValidationError with a "section.key"
  /// name.
  void validate() const;

  /// Controller config with the take-off course and station filled in.
  ControllerConfig effective_controller() const;
};

Scenario paper_nominal_scenario();

/// Throws ParseError on malformed lines and unknown keys, ValidationError on
/// invariant breaches.
Scenario parse_scenario(const std::string &text);
Scenario load_scenario(const std::string &path);

/// Full key listing, numbers at round-trip precision.
std::string serialize_scenario(const Scenario &scenario);

/// All accepted keys in serialization order.
std::vector<std::string> scenario_keys();

}  // namespace awe
