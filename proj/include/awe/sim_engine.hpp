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

// Fixed-step co-simulation of aircraft, ground station and autopilot.
//
// Each controller tick: (1) measurements from the plant state, (2) safety
// checks, (3) autopilot phase machine and loops, (4) ground-station geometry,
// winch law and slide, (5) disturbances, (6) telemetry, (7) plant
// integration over the tick with inputs, wind and disturbances held.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "awe/autopilot.hpp"
#include "awe/flight_model.hpp"
#include "awe/ground_station.hpp"
#include "awe/scenario.hpp"

namespace awe {

struct ImpulseEvent {
  double start = 0.0;     // [s]
  double duration = 0.0;  // [s]
  double peak = 0.0;      // [N]
};

/// Precomputed disturbance realization for one run. Evaluation is a pure
/// function of time.
class DisturbanceSchedule {
 public:
  DisturbanceSchedule() = default;
  DisturbanceSchedule(const DisturbanceConfig &config, const WindVector &wind, double duration, double sample_period,
                      std::uint64_t seed);

  /// Attitude and airspeed disturbances plus the forced tether pulse (in
  /// tether_force).
  DisturbanceInputs at(double t) const;
  Vec3 wind_at(double t) const;
  /// Half-sine forced tether pull at t [N].
  double impulse_at(double t) const;

  const std::vector<ImpulseEvent> &impulses() const { return impulses_; }

 private:
  double sample(const std::vector<double> &series, double t) const;

  double sample_period_ = 0.02;
  std::vector<double> roll_;
  std::vector<double> pitch_;
  std::vector<double> force_;
  std::vector<double> gust_noise_;
  std::vector<ImpulseEvent> impulses_;
  Vec3 wind_mean_;
  Vec3 gust_direction_{1.0, 0.0, 0.0};
  double gust_amplitude_ = 0.0;
  double gust_period_ = 10.0;
};

DisturbanceInputs inject_disturbance(const DisturbanceSchedule &schedule, double t);

enum class RunStatus { kRunning, kCompleted, kSensorFault };

std::string to_string(RunStatus status);

/// One telemetry row. Ground-station length and winch speed are the values
/// at the start of the tick, consistent with the logged geometry.
struct TelemetrySample {
  double t = 0.0;
  FlightMode mode = FlightMode::kOnSlide;
  int target = 1;  // 1 or 2
  AircraftState aircraft;
  References refs;
  ControlInputs inputs;
  double spring_compression = 0.0;
  double winch_speed = 0.0;
  double winch_ref_speed = 0.0;
  double unreeled_length = 0.0;
  double slack_length = 0.0;
  double tether_force = 0.0;   // spring-measured tether force
  double impulse_force = 0.0;  // forced pulse
  double slide_position = 0.0;
  double slide_speed = 0.0;
  double slide_accel = 0.0;
  bool attached = true;
  bool tether_connected = true;
  double forward_accel = 0.0;
  DisturbanceInputs disturbance;  // as applied to the plant
  Vec3 wind;
  SafetyStatus safety = SafetyStatus::kOk;
};

class Simulator {
 public:
  /// Throws ScenarioInvalid.
  explicit Simulator(const Scenario &scenario);

  /// Executes one controller tick and returns the row logged for it.
  TelemetrySample step();

  bool finished() const { return status_ != RunStatus::kRunning; }
  RunStatus status() const { return status_; }
  double time() const { return static_cast<double>(tick_) * scenario_.sim.control_period; }
  long tick() const { return tick_; }
  const AircraftState &aircraft() const { return aircraft_; }
  const Autopilot &autopilot() const { return autopilot_; }
  const GroundStation &ground_station() const { return ground_; }
  const DisturbanceSchedule &disturbances() const { return schedule_; }
  const Scenario &scenario() const { return scenario_; }
  /// Time of the automatic tether detach, negative if none.
  double detach_time() const { return detach_time_; }

 private:
  Measurements measure(double forward_accel);

  Scenario scenario_;
  AttitudeModelParams model_;
  Autopilot autopilot_;
  GroundStation ground_;
  DisturbanceSchedule schedule_;
  std::mt19937_64 noise_rng_;
  AircraftState aircraft_;
  ControlInputs held_;
  Vec3 rail_dir_;
  bool attached_ = true;
  double detach_time_ = -1.0;
  long tick_ = 0;
  long last_tick_ = 0;
  RunStatus status_ = RunStatus::kRunning;
};

struct LapStats {
  double start = 0.0;
  double end = 0.0;
  double rel_diff = -1.0;  // against the previous lap, negative for the first
};

struct RunMetrics {
  // Launch.
  double launch_detect_time = -1.0;
  double first_threshold_tick = -1.0;  // first tick where the slide accel reaches the threshold
  double release_time = -1.0;
  double release_travel = 0.0;
  double release_speed = 0.0;
  double slide_peak_accel = 0.0;
  // Climb and transition.
  double time_to_safe_altitude = -1.0;  // from launch detection
  double transition_time = -1.0;
  int transition_target = 0;
  Vec3 transition_position;
  // Tracking after settle_time past the transition.
  double settle_start = -1.0;
  double altitude_rms_error = 0.0;
  double altitude_max_error = 0.0;
  double altitude_max_dip = 0.0;  // largest drop below the reference
  double airspeed_mean_error = 0.0;
  double airspeed_rms_error = 0.0;
  // Minimum-radius turns (roll reference at its bound).
  int turn_samples = 0;
  double turn_roll_ref_mean = 0.0;
  double turn_bound_max_deviation = 0.0;
  double turn_ground_speed_mean = 0.0;
  double turn_roll_mean = 0.0;
  // Tether.
  int taut_events = 0;
  double taut_peak_force = 0.0;
  double taut_max_duration = 0.0;
  double taut_total_time = 0.0;
  double slack_force_product_max = 0.0;
  int impulse_count = 0;
  double impulse_peak_max = 0.0;
  double impulse_peak_max_rel_error = 0.0;
  // Figure-of-eight.
  std::vector<LapStats> laps;
  double eight_period = 0.0;
  bool converged_to_periodic = false;
  double periodic_since = -1.0;
  // Run outcome.
  RunStatus status = RunStatus::kRunning;
  double detach_time = -1.0;
  int stall_warning_samples = 0;
  double simulated_time = 0.0;
  std::size_t rows = 0;
  std::uint64_t telemetry_hash = 0;
};

/// Relative lap difference below which two laps count as repeated.
inline constexpr double kPeriodicityThreshold = 0.15;

RunMetrics compute_metrics(const std::vector<TelemetrySample> &samples, const Scenario &scenario,
                           const DisturbanceSchedule &schedule);

struct RunResult {
  std::vector<TelemetrySample> telemetry;  // decimated
  RunMetrics metrics;
};

/// Runs to the configured duration or a terminal safety event.
RunResult run_scenario(const Scenario &scenario);

}  // namespace awe
