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

#include "awe/sim_engine.hpp"

#include <algorithm>
#include <cmath>

#include "awe/telemetry.hpp"

namespace awe {

namespace {

// Independent stream per purpose so that enabling one source does not shift
// the draws of another.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return std::mt19937_64(seq);
}

// First-order low-pass filtered white noise with stationary std `sigma`.
std::vector<double> band_limited(std::mt19937_64 &rng, std::size_t n, double sigma, double cutoff, double h) {
  std::vector<double> out(n, 0.0);
  if (sigma <= 0.0) return out;
  std::normal_distribution<double> white(0.0, 1.0);
  const double alpha = std::exp(-2.0 * kPi * cutoff * h);
  const double gain = sigma * std::sqrt(1.0 - alpha * alpha);
  double x = sigma * white(rng);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = x;
    x = alpha * x + gain * white(rng);
  }
  return out;
}

}  // namespace

DisturbanceSchedule::DisturbanceSchedule(const DisturbanceConfig &config, const WindVector &wind, double duration,
                                         double sample_period, std::uint64_t seed)
    : sample_period_(sample_period),
      wind_mean_(wind.mean),
      gust_amplitude_(wind.gust.amplitude),
      gust_period_(wind.gust.period) {
  const auto n = static_cast<std::size_t>(std::ceil(duration / sample_period)) + 2;
  auto rng_roll = stream(seed, 1);
  auto rng_pitch = stream(seed, 2);
  auto rng_force = stream(seed, 3);
  auto rng_gust = stream(seed, 4);
  auto rng_pulse = stream(seed, 5);
  roll_ = band_limited(rng_roll, n, config.roll_noise_std, config.noise_cutoff, sample_period);
  pitch_ = band_limited(rng_pitch, n, config.pitch_noise_std, config.noise_cutoff, sample_period);
  force_ = band_limited(rng_force, n, config.airspeed_noise_std, config.noise_cutoff, sample_period);
  gust_noise_ = band_limited(rng_gust, n, wind.gust.noise_std, wind.gust.noise_cutoff, sample_period);

  const double horizontal = wind.mean.norm_xy();
  if (horizontal > 0.0) gust_direction_ = {wind.mean.x / horizontal, wind.mean.y / horizontal, 0.0};

  if (config.forced_impulses) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng_pulse); };
    double start = config.impulse_start + draw(0.0, config.impulse_gap_min);
    while (start < duration) {
      ImpulseEvent e;
      e.start = start;
      e.peak = draw(config.impulse_peak_min, config.impulse_peak_max);
      e.duration = draw(config.impulse_duration_min, config.impulse_duration_max);
      impulses_.push_back(e);
      start += draw(config.impulse_gap_min, config.impulse_gap_max);
    }
  }
}

double DisturbanceSchedule::sample(const std::vector<double> &series, double t) const {
  if (series.empty() || t <= 0.0) return series.empty() ? 0.0 : series.front();
  const double pos = t / sample_period_;
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= series.size()) return series.back();
  const double frac = pos - static_cast<double>(k);
  return series[k] + frac * (series[k + 1] - series[k]);
}

double DisturbanceSchedule::impulse_at(double t) const {
  for (const ImpulseEvent &e : impulses_) {
    if (t >= e.start && t <= e.start + e.duration) return e.peak * std::sin(kPi * (t - e.start) / e.duration);
    if (e.start > t) break;
  }
  return 0.0;
}

DisturbanceInputs DisturbanceSchedule::at(double t) const {
  DisturbanceInputs d;
  d.d_roll = sample(roll_, t);
  d.d_pitch = sample(pitch_, t);
  d.d_airspeed_force = sample(force_, t);
  d.tether_force = impulse_at(t);
  return d;
}

Vec3 DisturbanceSchedule::wind_at(double t) const {
  const double gust = gust_amplitude_ * std::sin(2.0 * kPi * t / gust_period_) + sample(gust_noise_, t);
  return wind_mean_ + gust_direction_ * gust;
}

DisturbanceInputs inject_disturbance(const DisturbanceSchedule &schedule, double t) { return schedule.at(t); }

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kRunning: return "running";
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kSensorFault: return "sensor_fault";
  }
  return "unknown";
}

namespace {

Scenario checked(const Scenario &scenario) {
  try {
    scenario.validate();
  } catch (const ValidationError &e) {
    throw ScenarioInvalid(e.what());
  }
  return scenario;
}

ControllerConfig latched_controller(const Scenario &s) {
  ControllerConfig c = s.effective_controller();
  if (s.sim.course_latch_noise > 0.0) {
    auto rng = stream(s.sim.seed, 6);
    std::normal_distribution<double> noise(0.0, s.sim.course_latch_noise);
    c.takeoff_course = wrap_angle(c.takeoff_course + noise(rng));
  }
  return c;
}

}  // namespace

Simulator::Simulator(const Scenario &scenario)
    : scenario_(checked(scenario)),
      model_(scenario_.model),
      autopilot_(latched_controller(scenario_), model_.a_roll, model_.b_roll, model_.a_pitch, model_.b_pitch),
      ground_(scenario_.ground, scenario_.station_origin, scenario_.rail_heading),
      schedule_(scenario_.disturbance, scenario_.wind, scenario_.sim.duration, scenario_.sim.control_period,
                scenario_.sim.seed),
      noise_rng_(stream(scenario_.sim.seed, 7)),
      rail_dir_{std::cos(scenario_.rail_heading), std::sin(scenario_.rail_heading), 0.0} {
  aircraft_.position = scenario_.station_origin;
  aircraft_.course = wrap_angle(scenario_.rail_heading);
  last_tick_ = std::lround(scenario_.sim.duration / scenario_.sim.control_period);
}

Measurements Simulator::measure(double forward_accel) {
  Measurements m;
  m.position = aircraft_.position;
  m.velocity = aircraft_.velocity;
  m.roll = aircraft_.roll;
  m.roll_rate = aircraft_.roll_rate;
  m.pitch = aircraft_.pitch;
  m.pitch_rate = aircraft_.pitch_rate;
  m.airspeed = aircraft_.airspeed;
  m.forward_accel = forward_accel;
  const MeasurementNoise &n = scenario_.sim.noise;
  if (n.enabled) {
    std::normal_distribution<double> g(0.0, 1.0);
    m.position += Vec3{g(noise_rng_), g(noise_rng_), g(noise_rng_)} * n.position_std;
    m.roll += n.attitude_std * g(noise_rng_);
    m.pitch += n.attitude_std * g(noise_rng_);
    m.roll_rate += n.rate_std * g(noise_rng_);
    m.pitch_rate += n.rate_std * g(noise_rng_);
    m.airspeed = std::max(0.0, m.airspeed + n.airspeed_std * g(noise_rng_));
  }
  return m;
}

TelemetrySample Simulator::step() {
  TelemetrySample row;
  if (finished()) return row;
  const SimConfig &sim = scenario_.sim;
  const GroundStationParams &gp = scenario_.ground;
  const double t = time();
  const Vec3 wind = schedule_.wind_at(t);
  const double wind_along_rail = wind.x * rail_dir_.x + wind.y * rail_dir_.y;

  // The slide carries the aircraft with wings level until release.
  const SlideSample slide = slide_profile(t - gp.launch_time, gp);
  if (attached_) {
    const double travel = slide.attached ? slide.position : slide_profile(slide_release_time(gp), gp).position;
    const double t_free = t - gp.launch_time - slide_release_time(gp);
    const double speed = slide.attached ? slide.speed : gp.release_speed;
    aircraft_ = AircraftState{};
    aircraft_.position = scenario_.station_origin + rail_dir_ * (travel + (slide.attached ? 0.0 : speed * t_free));
    aircraft_.course = wrap_angle(scenario_.rail_heading);
    aircraft_.airspeed = std::max(0.0, speed - wind_along_rail);
    aircraft_.velocity = rail_dir_ * speed;
    aircraft_.ground_speed = speed;
    if (!slide.attached) {
      attached_ = false;
      const GroundVelocity v = kinematics_step(aircraft_, wind);
      aircraft_.velocity = v.vec();
      aircraft_.ground_speed = v.norm;
    }
  }

  DisturbanceInputs dist = schedule_.at(t);
  const double impulse = dist.tether_force;
  const PlantInputs held{held_.roll, held_.pitch, held_.thrust};
  const double forward_accel =
      attached_ ? slide.accel : plant_derivative(aircraft_, held, model_, wind, dist).airspeed;

  const Measurements meas = measure(forward_accel);
  const SafetyStatus safety = safety_checks(meas, autopilot_.config());
  if (safety == SafetyStatus::kTetherDetach && ground_.tether_connected()) {
    ground_.release_tether();
    detach_time_ = t;
  }

  const AutopilotOutput ap = autopilot_.step(meas);
  held_ = ap.inputs;

  const GroundStationState before = ground_.state();
  const TetherGeometry geom = ground_.step(t, aircraft_.position, sim.control_period);

  const double spring_force = attached_ ? 0.0 : geom.tether_force;
  dist.tether_force = spring_force + impulse;
  dist.d_pitch -= scenario_.disturbance.tether_pitch_coupling * dist.tether_force;

  row.t = t;
  row.mode = ap.phase.mode;
  row.target = ap.phase.active_target == Target::kFirst ? 1 : 2;
  row.aircraft = aircraft_;
  row.refs = ap.refs;
  row.inputs = ap.inputs;
  row.spring_compression = geom.spring_compression;
  row.winch_speed = before.winch_speed;
  row.winch_ref_speed = ground_.state().winch_ref_speed;
  row.unreeled_length = before.unreeled_length;
  row.slack_length = geom.slack_length;
  row.tether_force = geom.tether_force;
  row.impulse_force = impulse;
  row.slide_position = slide.position;
  row.slide_speed = slide.speed;
  row.slide_accel = slide.accel;
  row.attached = attached_;
  row.tether_connected = ground_.tether_connected();
  row.forward_accel = forward_accel;
  row.disturbance = dist;
  row.wind = wind;
  row.safety = safety;

  if (safety == SafetyStatus::kSensorFault) {
    status_ = RunStatus::kSensorFault;
    return row;
  }

  if (!attached_) {
    const PlantInputs u{held_.roll, held_.pitch, held_.thrust};
    const double h = sim.dt;
    for (int i = 0; i < sim.substeps(); ++i) {
      aircraft_ = integrate_plant(aircraft_, u, model_, wind, dist, h, sim.integrator);
    }
  }
  ++tick_;
  if (tick_ > last_tick_) status_ = RunStatus::kCompleted;
  return row;
}

namespace {

struct Lap {
  std::size_t begin;
  std::size_t end;  // exclusive
};

std::vector<Vec3> resample(const std::vector<TelemetrySample> &s, const Lap &lap, int points) {
  std::vector<Vec3> out(points);
  const double t0 = s[lap.begin].t;
  const double t1 = s[lap.end - 1].t;
  std::size_t k = lap.begin;
  for (int i = 0; i < points; ++i) {
    const double t = t0 + (t1 - t0) * i / (points - 1);
    while (k + 1 < lap.end - 1 && s[k + 1].t < t) ++k;
    const std::size_t k1 = std::min(k + 1, lap.end - 1);
    const double span = s[k1].t - s[k].t;
    const double frac = span > 0.0 ? clamp((t - s[k].t) / span, 0.0, 1.0) : 0.0;
    out[i] = s[k].aircraft.position + (s[k1].aircraft.position - s[k].aircraft.position) * frac;
  }
  return out;
}

}  // namespace

RunMetrics compute_metrics(const std::vector<TelemetrySample> &samples, const Scenario &scenario,
                           const DisturbanceSchedule &schedule) {
  RunMetrics m;
  m.rows = samples.size();
  if (samples.empty()) return m;
  const ControllerConfig config = scenario.effective_controller();
  const GroundStationParams &gp = scenario.ground;
  m.simulated_time = samples.back().t;

  m.release_time = gp.launch_time + slide_release_time(gp);
  const SlideSample rel = slide_profile(slide_release_time(gp), gp);
  m.release_travel = rel.position;
  m.release_speed = rel.speed;

  const TelemetrySample *prev = nullptr;
  double taut_start = -1.0;
  for (const TelemetrySample &s : samples) {
    m.slide_peak_accel = std::max(m.slide_peak_accel, s.slide_accel);
    if (m.first_threshold_tick < 0.0 && s.attached && s.slide_accel >= config.launch_accel_threshold) {
      m.first_threshold_tick = s.t;
    }
    if (prev && prev->mode == FlightMode::kOnSlide && s.mode != FlightMode::kOnSlide) m.launch_detect_time = s.t;
    if (prev && prev->mode != FlightMode::kFigureEight && s.mode == FlightMode::kFigureEight) {
      m.transition_time = s.t;
      m.transition_target = s.target;
      m.transition_position = s.aircraft.position;
    }
    if (m.launch_detect_time >= 0.0 && m.time_to_safe_altitude < 0.0 &&
        s.aircraft.position.z >= config.safe_altitude) {
      m.time_to_safe_altitude = s.t - m.launch_detect_time;
    }
    if (!s.attached && s.aircraft.airspeed < scenario.model.stall_warning_speed) ++m.stall_warning_samples;

    m.slack_force_product_max = std::max(m.slack_force_product_max, s.slack_length * s.tether_force);
    if (!s.attached && s.tether_force > 0.0) {
      if (taut_start < 0.0) {
        taut_start = s.t;
        ++m.taut_events;
      }
      m.taut_peak_force = std::max(m.taut_peak_force, s.tether_force);
    } else if (taut_start >= 0.0) {
      m.taut_max_duration = std::max(m.taut_max_duration, s.t - taut_start);
      m.taut_total_time += s.t - taut_start;
      taut_start = -1.0;
    }
    if (s.safety == SafetyStatus::kTetherDetach && m.detach_time < 0.0) m.detach_time = s.t;
    prev = &s;
  }
  if (taut_start >= 0.0) {
    m.taut_max_duration = std::max(m.taut_max_duration, samples.back().t - taut_start);
    m.taut_total_time += samples.back().t - taut_start;
  }

  // Forced pulses: sampled peak against the configured peak.
  for (const ImpulseEvent &e : schedule.impulses()) {
    if (e.start > m.simulated_time) break;
    double peak = 0.0;
    for (const TelemetrySample &s : samples) {
      if (s.t >= e.start && s.t <= e.start + e.duration) peak = std::max(peak, s.impulse_force);
    }
    ++m.impulse_count;
    m.impulse_peak_max = std::max(m.impulse_peak_max, peak);
    m.impulse_peak_max_rel_error = std::max(m.impulse_peak_max_rel_error, std::abs(peak - e.peak) / e.peak);
  }

  // Tracking after settling.
  if (m.transition_time >= 0.0) {
    m.settle_start = m.transition_time + scenario.sim.settle_time;
    double alt_sq = 0.0, air_sum = 0.0, air_sq = 0.0;
    int n = 0;
    for (const TelemetrySample &s : samples) {
      if (s.mode != FlightMode::kFigureEight || s.t < m.settle_start) continue;
      const double ez = config.target_altitude - s.aircraft.position.z;
      const double ev = s.refs.airspeed - s.aircraft.airspeed;
      alt_sq += ez * ez;
      m.altitude_max_error = std::max(m.altitude_max_error, std::abs(ez));
      m.altitude_max_dip = std::max(m.altitude_max_dip, ez);
      air_sum += ev;
      air_sq += ev * ev;
      ++n;
    }
    if (n > 0) {
      m.altitude_rms_error = std::sqrt(alt_sq / n);
      m.airspeed_mean_error = air_sum / n;
      m.airspeed_rms_error = std::sqrt(air_sq / n);
    } else {
      m.settle_start = -1.0;
    }
  }

  // Minimum-radius turns: samples whose unclamped roll reference exceeds the
  // radius bound.
  double ref_sum = 0.0, speed_sum = 0.0, roll_sum = 0.0;
  for (const TelemetrySample &s : samples) {
    if (s.mode != FlightMode::kFigureEight) continue;
    const double v = s.aircraft.ground_speed;
    if (!(v > kMinGroundSpeed)) continue;
    const double bound = max_roll_ref(v, config);
    const double unclamped = config.k_course * v / config.gravity * std::abs(s.refs.course_error);
    if (unclamped <= bound) continue;
    ++m.turn_samples;
    ref_sum += std::abs(s.refs.roll);
    speed_sum += v;
    roll_sum += std::abs(s.aircraft.roll);
    m.turn_bound_max_deviation = std::max(m.turn_bound_max_deviation, std::abs(std::abs(s.refs.roll) - bound));
  }
  if (m.turn_samples > 0) {
    m.turn_roll_ref_mean = ref_sum / m.turn_samples;
    m.turn_ground_speed_mean = speed_sum / m.turn_samples;
    m.turn_roll_mean = roll_sum / m.turn_samples;
  }

  // Laps: from one switch onto the transition target to the next.
  std::vector<std::size_t> marks;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const TelemetrySample &a = samples[i - 1];
    const TelemetrySample &b = samples[i];
    if (a.mode == FlightMode::kFigureEight && b.mode == FlightMode::kFigureEight && a.target != b.target &&
        b.target == m.transition_target) {
      marks.push_back(i);
    }
  }
  constexpr int kPoints = 200;
  std::vector<std::vector<Vec3>> shapes;
  for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
    const Lap lap{marks[k], marks[k + 1] + 1};
    LapStats stats;
    stats.start = samples[lap.begin].t;
    stats.end = samples[lap.end - 1].t;
    shapes.push_back(resample(samples, lap, kPoints));
    if (shapes.size() >= 2) {
      const auto &cur = shapes.back();
      const auto &last = shapes[shapes.size() - 2];
      double diff = 0.0, size = 0.0;
      for (int i = 0; i < kPoints; ++i) {
        const Vec3 d = cur[i] - last[i];
        const Vec3 r = cur[i] - config.station_position;
        diff += d.x * d.x + d.y * d.y + d.z * d.z;
        size += r.x * r.x + r.y * r.y + r.z * r.z;
      }
      stats.rel_diff = std::sqrt(diff / size);
    }
    m.laps.push_back(stats);
  }
  if (!m.laps.empty()) {
    double total = 0.0;
    for (const LapStats &l : m.laps) total += l.end - l.start;
    m.eight_period = total / static_cast<double>(m.laps.size());
  }
  // Converged once every comparison from some lap on is below the threshold,
  // with at least two such comparisons.
  std::size_t first_good = m.laps.size();
  for (std::size_t k = m.laps.size(); k-- > 1;) {
    if (m.laps[k].rel_diff >= 0.0 && m.laps[k].rel_diff < kPeriodicityThreshold) {
      first_good = k;
    } else {
      break;
    }
  }
  if (first_good < m.laps.size() && m.laps.size() - first_good >= 2) {
    m.converged_to_periodic = true;
    m.periodic_since = m.laps[first_good - 1].start;
  }
  return m;
}

RunResult run_scenario(const Scenario &scenario) {
  Simulator sim(scenario);
  std::vector<TelemetrySample> all;
  all.reserve(static_cast<std::size_t>(scenario.sim.duration / scenario.sim.control_period) + 2);
  while (!sim.finished()) all.push_back(sim.step());

  RunResult result;
  result.metrics = compute_metrics(all, sim.scenario(), sim.disturbances());
  result.metrics.status = sim.status();
  result.metrics.detach_time = sim.detach_time();
  const int dec = scenario.sim.decimation;
  for (std::size_t i = 0; i < all.size(); i += static_cast<std::size_t>(dec)) result.telemetry.push_back(all[i]);
  result.metrics.rows = result.telemetry.size();
  result.metrics.telemetry_hash = telemetry_hash(result.telemetry);
  return result;
}

}  // namespace awe
