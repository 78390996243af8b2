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

#include "awe/ground_station.hpp"

#include <algorithm>
#include <cmath>

namespace awe {

void GroundStationParams::validate() const {
  auto require = [](bool ok, const char *key, const char *what) {
    if (!ok) throw ValidationError(key, what);
  };
  auto pos = [&](double v, const char *key) { require(std::isfinite(v) && v > 0.0, key, "must be positive"); };
  pos(spring_stiffness, "spring_stiffness");
  pos(spring_max_compression, "spring_max_compression");
  pos(rail_length, "rail_length");
  pos(slide_mass, "slide_mass");
  pos(tether_max_length, "tether_max_length");
  pos(winch_drum_radius, "winch_drum_radius");
  require(std::isfinite(zone_low_anchor) && zone_low_anchor > 0.0, "zone_low_anchor", "must be positive");
  require(std::isfinite(zone_low) && zone_low > zone_low_anchor, "zone_low", "must exceed zone_low_anchor");
  require(std::isfinite(zone_high) && zone_high > zone_low, "zone_high", "must exceed zone_low");
  require(std::isfinite(zone_high_anchor) && zone_high_anchor > zone_high, "zone_high_anchor",
          "must exceed zone_high");
  require(zone_high_anchor < spring_max_compression, "zone_high_anchor",
          "must be below spring_max_compression");
  require(std::isfinite(min_ref_speed) && min_ref_speed < 0.0, "min_ref_speed", "must be negative");
  require(std::isfinite(max_ref_speed) && max_ref_speed > 0.0, "max_ref_speed", "must be positive");
  require(std::isfinite(reel_in_accel) && reel_in_accel < 0.0, "reel_in_accel", "must be negative");
  require(std::isfinite(reel_out_accel) && reel_out_accel > 0.0, "reel_out_accel", "must be positive");
  pos(winch_time_constant, "winch_time_constant");
  pos(winch_max_accel, "winch_max_accel");
  pos(control_period, "control_period");
  pos(slide_peak_accel, "slide_peak_accel");
  require(std::isfinite(slide_jerk_time) && slide_jerk_time >= 0.0, "slide_jerk_time", "must be non-negative");
  pos(release_speed, "release_speed");
  pos(slide_brake_decel, "slide_brake_decel");
  require(std::isfinite(launch_time) && launch_time >= 0.0, "launch_time", "must be non-negative");
  require(std::isfinite(initial_slack) && initial_slack >= 0.0 && initial_slack <= tether_max_length,
          "initial_slack", "must lie in [0, tether_max_length]");
  pos(overcompression_factor, "overcompression_factor");
  // The slide must release and stop on the rails.
  const double release_travel = slide_profile(slide_release_time(*this) + 1e-9, *this).position;
  const double total_travel =
      release_travel + release_speed * release_speed / (2.0 * slide_brake_decel);
  require(total_travel <= rail_length, "rail_length", "too short for the launch and braking profile");
}

double winch_reference_speed(double compression, double prev_ref, const GroundStationParams &params) {
  if (!(compression >= 0.0 && compression <= params.spring_max_compression)) {
    throw OutOfRangeCompression("spring compression " + std::to_string(compression) + " m outside [0, " +
                                std::to_string(params.spring_max_compression) + "]");
  }
  const double ts = params.control_period;
  if (compression < params.zone_low) {
    const double scaled = (compression - params.zone_low) / (params.zone_low_anchor - params.zone_low);
    return std::min(0.0, std::max(params.min_ref_speed, prev_ref + ts * params.reel_in_accel * scaled));
  }
  if (compression < params.zone_high) return prev_ref;
  const double scaled = (compression - params.zone_high) / (params.zone_high_anchor - params.zone_high);
  return std::max(0.0, std::min(params.max_ref_speed, prev_ref + ts * params.reel_out_accel * scaled));
}

WinchUpdate winch_track(const GroundStationState &state, const GroundStationParams &params, double dt) {
  const double relax = 1.0 - std::exp(-dt / params.winch_time_constant);
  const double max_change = params.winch_max_accel * dt;
  const double change = clamp((state.winch_ref_speed - state.winch_speed) * relax, -max_change, max_change);

  WinchUpdate out;
  out.winch_speed = state.winch_speed + change;
  const double length = state.unreeled_length + out.winch_speed * dt;
  out.unreeled_length = clamp(length, 0.0, params.tether_max_length);
  out.tether_end_reached = length >= params.tether_max_length;
  if (out.unreeled_length <= 0.0 && out.winch_speed < 0.0) out.winch_speed = 0.0;
  if (out.tether_end_reached && out.winch_speed > 0.0) out.winch_speed = 0.0;
  return out;
}

TetherGeometry tether_geometry(const Vec3 &aircraft_position, const Vec3 &station_origin,
                               const GroundStationState &state, const GroundStationParams &params) {
  TetherGeometry g;
  g.distance = (aircraft_position - station_origin).norm();
  const double excess = g.distance - state.unreeled_length;
  if (excess <= 0.0) {
    g.slack_length = -excess;
    return g;
  }
  // The tether wraps 180 deg around the spring pulley, so a compression x_s
  // absorbs 2 x_s of path length and the spring carries twice the tether force.
  const double raw = 0.5 * excess;
  g.spring_compression = std::min(params.spring_max_compression, raw);
  g.tether_force = 0.5 * params.spring_stiffness * g.spring_compression;
  if (raw > params.spring_max_compression) {
    g.tether_force +=
        0.5 * params.overcompression_factor * params.spring_stiffness * (raw - params.spring_max_compression);
  }
  return g;
}

namespace {

struct SlidePhases {
  double ramp_end_speed;
  double ramp_end_position;
  double release_time;
  double release_position;
};

SlidePhases slide_phases(const GroundStationParams &p) {
  SlidePhases ph{};
  const double a = p.slide_peak_accel;
  const double tj = p.slide_jerk_time;
  const double ramp_speed = 0.5 * a * tj;
  if (tj > 0.0 && p.release_speed <= ramp_speed) {
    // Release during the jerk ramp: v = a t^2 / (2 tj).
    ph.release_time = std::sqrt(2.0 * p.release_speed * tj / a);
    ph.release_position = a * std::pow(ph.release_time, 3) / (6.0 * tj);
    ph.ramp_end_speed = p.release_speed;
    ph.ramp_end_position = ph.release_position;
    return ph;
  }
  ph.ramp_end_speed = ramp_speed;
  ph.ramp_end_position = a * tj * tj / 6.0;
  const double hold = (p.release_speed - ramp_speed) / a;
  ph.release_time = tj + hold;
  ph.release_position = ph.ramp_end_position + ramp_speed * hold + 0.5 * a * hold * hold;
  return ph;
}

}  // namespace

double slide_release_time(const GroundStationParams &params) { return slide_phases(params).release_time; }

SlideSample slide_profile(double t, const GroundStationParams &params) {
  SlideSample s;
  if (t <= 0.0) return s;
  const SlidePhases ph = slide_phases(params);
  const double a = params.slide_peak_accel;
  const double tj = params.slide_jerk_time;

  if (t < ph.release_time) {
    if (t < tj) {
      s.accel = a * t / tj;
      s.speed = 0.5 * a * t * t / tj;
      s.position = a * t * t * t / (6.0 * tj);
    } else {
      const double h = t - tj;
      s.accel = a;
      s.speed = ph.ramp_end_speed + a * h;
      s.position = ph.ramp_end_position + ph.ramp_end_speed * h + 0.5 * a * h * h;
    }
    return s;
  }

  s.attached = false;
  const double vr = params.release_speed;
  const double brake = params.slide_brake_decel;
  const double h = std::min(t - ph.release_time, vr / brake);
  s.speed = vr - brake * h;
  s.position = ph.release_position + vr * h - 0.5 * brake * h * h;
  s.accel = s.speed > 0.0 ? -brake : 0.0;
  return s;
}

GroundStation::GroundStation(GroundStationParams params, Vec3 origin, double rail_heading)
    : params_(params), origin_(origin), rail_heading_(rail_heading) {
  state_.unreeled_length = params_.initial_slack;
  state_.slack_length = params_.initial_slack;
}

Vec3 GroundStation::slide_point() const {
  return origin_ + Vec3{std::cos(rail_heading_), std::sin(rail_heading_), 0.0} * state_.slide_position;
}

TetherGeometry GroundStation::step(double t, const Vec3 &aircraft_position, double dt) {
  const SlideSample slide = slide_profile(t - params_.launch_time, params_);
  state_.slide_position = slide.position;
  state_.slide_speed = slide.speed;
  state_.slide_attached = slide.attached;

  TetherGeometry geom;
  if (tether_connected_) geom = tether_geometry(aircraft_position, origin_, state_, params_);
  state_.spring_compression = geom.spring_compression;
  state_.slack_length = geom.slack_length;
  state_.tether_force = geom.tether_force;

  if (state_.launch_active) {
    // Feed-forward: latch the winch to the slide, then hold the release speed
    // until the spring first reaches the reel-out zone.
    if (slide.attached) {
      state_.winch_ref_speed = slide.speed;
    } else {
      state_.winch_ref_speed = params_.release_speed;
      if (geom.spring_compression >= params_.zone_high) state_.launch_active = false;
    }
  } else {
    state_.winch_ref_speed = winch_reference_speed(geom.spring_compression, state_.winch_ref_speed, params_);
  }

  const WinchUpdate w = winch_track(state_, params_, dt);
  state_.winch_speed = w.winch_speed;
  state_.unreeled_length = w.unreeled_length;
  state_.tether_end_reached = state_.tether_end_reached || w.tether_end_reached;
  return geom;
}

}  // namespace awe
