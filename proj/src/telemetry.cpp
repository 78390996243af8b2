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

#include "awe/telemetry.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace awe {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

struct Column {
  const char *name;
  std::function<std::string(const TelemetrySample &)> get;
  std::function<void(TelemetrySample &, const std::string &)> set;
};

double to_double(const std::string &text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("expected a number, got '" + text + "'");
  }
  return v;
}

FlightMode mode_from(const std::string &s) {
  for (FlightMode m : {FlightMode::kOnSlide, FlightMode::kClimbOut, FlightMode::kFigureEight}) {
    if (to_string(m) == s) return m;
  }
  throw ParseError("unknown flight mode '" + s + "'");
}

SafetyStatus safety_from(const std::string &s) {
  for (SafetyStatus m : {SafetyStatus::kOk, SafetyStatus::kTetherDetach, SafetyStatus::kSensorFault}) {
    if (to_string(m) == s) return m;
  }
  throw ParseError("unknown safety status '" + s + "'");
}

const std::vector<Column> &columns() {
  static const std::vector<Column> table = [] {
    std::vector<Column> c;
#define AWE_COL(name, expr)                                                                             \
  c.push_back({name, [](const TelemetrySample &s) { return format_g9(expr); },                         \
               [](TelemetrySample &s, const std::string &v) { expr = to_double(v); }})
    AWE_COL("t", s.t);
    c.push_back({"mode", [](const TelemetrySample &s) { return to_string(s.mode); },
                 [](TelemetrySample &s, const std::string &v) { s.mode = mode_from(v); }});
    c.push_back({"target", [](const TelemetrySample &s) { return std::to_string(s.target); },
                 [](TelemetrySample &s, const std::string &v) { s.target = static_cast<int>(to_double(v)); }});
    AWE_COL("x", s.aircraft.position.x);
    AWE_COL("y", s.aircraft.position.y);
    AWE_COL("z", s.aircraft.position.z);
    AWE_COL("vx", s.aircraft.velocity.x);
    AWE_COL("vy", s.aircraft.velocity.y);
    AWE_COL("vz", s.aircraft.velocity.z);
    AWE_COL("ground_speed", s.aircraft.ground_speed);
    AWE_COL("course", s.aircraft.course);
    AWE_COL("roll", s.aircraft.roll);
    AWE_COL("roll_rate", s.aircraft.roll_rate);
    AWE_COL("pitch", s.aircraft.pitch);
    AWE_COL("pitch_rate", s.aircraft.pitch_rate);
    AWE_COL("airspeed", s.aircraft.airspeed);
    AWE_COL("roll_ref", s.refs.roll);
    AWE_COL("pitch_ref", s.refs.pitch);
    AWE_COL("airspeed_ref", s.refs.airspeed);
    AWE_COL("course_ref", s.refs.course);
    AWE_COL("course_error", s.refs.course_error);
    AWE_COL("u_roll", s.inputs.roll);
    AWE_COL("u_pitch", s.inputs.pitch);
    AWE_COL("u_thrust", s.inputs.thrust);
    AWE_COL("spring_compression", s.spring_compression);
    AWE_COL("winch_speed", s.winch_speed);
    AWE_COL("winch_ref_speed", s.winch_ref_speed);
    AWE_COL("unreeled_length", s.unreeled_length);
    AWE_COL("slack_length", s.slack_length);
    AWE_COL("tether_force", s.tether_force);
    AWE_COL("impulse_force", s.impulse_force);
    AWE_COL("slide_position", s.slide_position);
    AWE_COL("slide_speed", s.slide_speed);
    AWE_COL("slide_accel", s.slide_accel);
    c.push_back({"attached", [](const TelemetrySample &s) { return std::string(s.attached ? "1" : "0"); },
                 [](TelemetrySample &s, const std::string &v) { s.attached = v == "1"; }});
    c.push_back({"tether_connected",
                 [](const TelemetrySample &s) { return std::string(s.tether_connected ? "1" : "0"); },
                 [](TelemetrySample &s, const std::string &v) { s.tether_connected = v == "1"; }});
    AWE_COL("forward_accel", s.forward_accel);
    AWE_COL("d_roll", s.disturbance.d_roll);
    AWE_COL("d_pitch", s.disturbance.d_pitch);
    AWE_COL("d_airspeed_force", s.disturbance.d_airspeed_force);
    AWE_COL("applied_tether_force", s.disturbance.tether_force);
    AWE_COL("wind_x", s.wind.x);
    AWE_COL("wind_y", s.wind.y);
    AWE_COL("wind_z", s.wind.z);
    c.push_back({"safety", [](const TelemetrySample &s) { return to_string(s.safety); },
                 [](TelemetrySample &s, const std::string &v) { s.safety = safety_from(v); }});
#undef AWE_COL
    return c;
  }();
  return table;
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void strip_cr(std::string &line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

const std::vector<std::string> &telemetry_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Column &c : columns()) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

std::size_t write_telemetry(std::ostream &out, const std::vector<TelemetrySample> &samples) {
  const auto &cols = columns();
  out << "# " << kTelemetrySchema << "\n";
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
  out << "\n";
  for (const TelemetrySample &s : samples) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].get(s);
    out << "\n";
  }
  return samples.size();
}

std::string telemetry_csv(const std::vector<TelemetrySample> &samples) {
  std::ostringstream ss;
  write_telemetry(ss, samples);
  return ss.str();
}

std::uint64_t fnv1a(const std::string &bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t telemetry_hash(const std::vector<TelemetrySample> &samples) { return fnv1a(telemetry_csv(samples)); }

std::vector<TelemetrySample> read_telemetry(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("telemetry: empty input");
  strip_cr(line);
  if (line != std::string("# ") + kTelemetrySchema) {
    throw ParseError("telemetry: unsupported schema line '" + line + "', expected '# " + kTelemetrySchema + "'");
  }
  if (!std::getline(in, line)) throw ParseError("telemetry: missing header row");
  strip_cr(line);
  if (split(line, ',') != telemetry_columns()) throw ParseError("telemetry: header does not match the schema");
  const auto &cols = columns();
  std::vector<TelemetrySample> out;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != cols.size()) throw ParseError("telemetry: row " + std::to_string(row) + " has wrong width");
    TelemetrySample s;
    try {
      for (std::size_t i = 0; i < cols.size(); ++i) cols[i].set(s, fields[i]);
    } catch (const ParseError &e) {
      throw ParseError("telemetry: row " + std::to_string(row) + ": " + e.what());
    }
    if (!out.empty() && !(s.t > out.back().t)) {
      throw ParseError("telemetry: row " + std::to_string(row) + ": time not increasing");
    }
    out.push_back(s);
  }
  return out;
}

void write_id_csv(std::ostream &out, const IdChannels &channels) {
  out << "# awe-iddata v1\n";
  out << "# sample_time=" << format_g9(channels.sample_time) << "\n";
  out << "# k_id=" << format_g9(channels.k_id) << "\n";
  out << "t";
  for (const std::string &n : channels.names) out << "," << n << "," << n << "_rate," << n << "_ref";
  out << "\n";
  const std::size_t rows = channels.data.empty() ? 0 : channels.data.front().size();
  for (std::size_t k = 0; k < rows; ++k) {
    // Exact sample values so that a noiseless fixture refits exactly.
    char buf[40];
    out << format_g9(static_cast<double>(k) * channels.sample_time);
    for (const IdDataset &d : channels.data) {
      for (double v : {d.angle[k], d.rate[k], d.reference[k]}) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << "," << buf;
      }
    }
    out << "\n";
  }
}

IdChannels read_id_csv(std::istream &in) {
  IdChannels ch;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("iddata: empty input");
  strip_cr(line);
  if (line != "# awe-iddata v1") throw ParseError("iddata: unsupported schema line '" + line + "'");
  bool have_ts = false, have_k = false;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.rfind("# sample_time=", 0) == 0) {
      ch.sample_time = to_double(line.substr(14));
      have_ts = true;
    } else if (line.rfind("# k_id=", 0) == 0) {
      ch.k_id = to_double(line.substr(7));
      have_k = true;
    } else if (line.rfind("#", 0) == 0) {
      continue;
    } else {
      header = split(line, ',');
      break;
    }
  }
  if (!have_ts || !have_k) throw ParseError("iddata: sample_time and k_id metadata are required");
  if (header.empty() || header[0] != "t" || (header.size() - 1) % 3 != 0) {
    throw ParseError("iddata: header must be t followed by <ch>,<ch>_rate,<ch>_ref triples");
  }
  for (std::size_t i = 1; i < header.size(); i += 3) {
    const std::string &n = header[i];
    if (header[i + 1] != n + "_rate" || header[i + 2] != n + "_ref") {
      throw ParseError("iddata: malformed column triple for '" + n + "'");
    }
    ch.names.push_back(n);
    IdDataset d;
    d.sample_time = ch.sample_time;
    d.k_id = ch.k_id;
    ch.data.push_back(d);
  }
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw ParseError("iddata: row " + std::to_string(row) + " has wrong width");
    try {
      for (std::size_t c = 0; c < ch.data.size(); ++c) {
        ch.data[c].angle.push_back(to_double(f[1 + 3 * c]));
        ch.data[c].rate.push_back(to_double(f[2 + 3 * c]));
        ch.data[c].reference.push_back(to_double(f[3 + 3 * c]));
      }
    } catch (const ParseError &e) {
      throw ParseError("iddata: row " + std::to_string(row) + ": " + e.what());
    }
  }
  return ch;
}

IdDataset id_channel(const IdChannels &channels, const std::string &name) {
  for (std::size_t i = 0; i < channels.names.size(); ++i) {
    if (channels.names[i] == name) return channels.data[i];
  }
  throw ValidationError("channel", "'" + name + "' not present in the dataset");
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

}  // namespace

void write_metrics_text(std::ostream &out, const RunMetrics &m, const std::string &name) {
  out << "run " << name << ": " << to_string(m.status) << " after " << format_g9(m.simulated_time) << " s, "
      << m.rows << " telemetry rows\n";
  out << "launch\n";
  out << "  detected at            " << format_g9(m.launch_detect_time) << " s\n";
  out << "  release at             " << format_g9(m.release_time) << " s, " << format_g9(m.release_speed)
      << " m/s after " << format_g9(m.release_travel) << " m of travel\n";
  out << "  slide peak accel       " << format_g9(m.slide_peak_accel) << " m/s^2\n";
  out << "climb and transition\n";
  out << "  time to safe altitude  " << format_g9(m.time_to_safe_altitude) << " s\n";
  out << "  transition at          " << format_g9(m.transition_time) << " s toward target " << m.transition_target
      << "\n";
  out << "tracking (from " << format_g9(m.settle_start) << " s)\n";
  out << "  altitude error         rms " << format_g9(m.altitude_rms_error) << " m, max "
      << format_g9(m.altitude_max_error) << " m, max dip " << format_g9(m.altitude_max_dip) << " m\n";
  out << "  airspeed error         mean " << format_g9(m.airspeed_mean_error) << " m/s, rms "
      << format_g9(m.airspeed_rms_error) << " m/s\n";
  out << "minimum-radius turns\n";
  out << "  samples                " << m.turn_samples << "\n";
  out << "  roll reference         " << format_g9(rad_to_deg(m.turn_roll_ref_mean)) << " deg mean at "
      << format_g9(m.turn_ground_speed_mean) << " m/s\n";
  out << "  roll                   " << format_g9(rad_to_deg(m.turn_roll_mean)) << " deg mean\n";
  out << "tether\n";
  out << "  taut events            " << m.taut_events << ", peak " << format_g9(m.taut_peak_force)
      << " N, longest " << format_g9(m.taut_max_duration) << " s\n";
  out << "  forced pulses          " << m.impulse_count << ", peak " << format_g9(m.impulse_peak_max) << " N\n";
  if (m.detach_time >= 0.0) out << "  detached at            " << format_g9(m.detach_time) << " s\n";
  out << "figure-of-eight\n";
  out << "  laps                   " << m.laps.size() << ", mean period " << format_g9(m.eight_period) << " s\n";
  out << "  periodic               " << (m.converged_to_periodic ? "yes" : "no");
  if (m.converged_to_periodic) out << " since " << format_g9(m.periodic_since) << " s";
  out << "\n";
  out << "telemetry hash           " << hex64(m.telemetry_hash) << "\n";
}

void write_metrics_kv(std::ostream &out, const RunMetrics &m, const std::string &name) {
  auto kv = [&](const char *k, const std::string &v) { out << k << "=" << v << "\n"; };
  auto num = [&](const char *k, double v) { kv(k, format_g9(v)); };
  kv("scenario", name);
  kv("status", to_string(m.status));
  num("simulated_time", m.simulated_time);
  kv("rows", std::to_string(m.rows));
  num("launch_detect_time", m.launch_detect_time);
  num("first_threshold_tick", m.first_threshold_tick);
  num("release_time", m.release_time);
  num("release_travel", m.release_travel);
  num("release_speed", m.release_speed);
  num("slide_peak_accel", m.slide_peak_accel);
  num("time_to_safe_altitude", m.time_to_safe_altitude);
  num("transition_time", m.transition_time);
  kv("transition_target", std::to_string(m.transition_target));
  num("settle_start", m.settle_start);
  num("altitude_rms_error", m.altitude_rms_error);
  num("altitude_max_error", m.altitude_max_error);
  num("altitude_max_dip", m.altitude_max_dip);
  num("airspeed_mean_error", m.airspeed_mean_error);
  num("airspeed_rms_error", m.airspeed_rms_error);
  kv("turn_samples", std::to_string(m.turn_samples));
  num("turn_roll_ref_mean", m.turn_roll_ref_mean);
  num("turn_bound_max_deviation", m.turn_bound_max_deviation);
  num("turn_ground_speed_mean", m.turn_ground_speed_mean);
  num("turn_roll_mean", m.turn_roll_mean);
  kv("taut_events", std::to_string(m.taut_events));
  num("taut_peak_force", m.taut_peak_force);
  num("taut_max_duration", m.taut_max_duration);
  num("taut_total_time", m.taut_total_time);
  num("slack_force_product_max", m.slack_force_product_max);
  kv("impulse_count", std::to_string(m.impulse_count));
  num("impulse_peak_max", m.impulse_peak_max);
  num("impulse_peak_max_rel_error", m.impulse_peak_max_rel_error);
  kv("laps", std::to_string(m.laps.size()));
  num("eight_period", m.eight_period);
  kv("converged_to_periodic", m.converged_to_periodic ? "true" : "false");
  num("periodic_since", m.periodic_since);
  num("detach_time", m.detach_time);
  kv("stall_warning_samples", std::to_string(m.stall_warning_samples));
  kv("telemetry_hash", hex64(m.telemetry_hash));
}

void write_id_result_text(std::ostream &out, const IdResult &r, const std::string &channel) {
  out << channel << " identification: a = " << format_g9(r.a_hat) << " 1/s, b = " << format_g9(r.b_hat)
      << " 1/s^2, cost " << format_g9(r.cost) << ", " << (r.converged ? "converged" : "not converged");
  if (r.flat_cost) out << " (flat cost surface: no excitation)";
  out << ", " << r.iterations << " iterations\n";
}

void write_id_result_kv(std::ostream &out, const IdResult &r, const std::string &channel) {
  out << "channel=" << channel << "\n";
  out << "a_hat=" << format_g9(r.a_hat) << "\n";
  out << "b_hat=" << format_g9(r.b_hat) << "\n";
  out << "cost=" << format_g9(r.cost) << "\n";
  out << "converged=" << (r.converged ? "true" : "false") << "\n";
  out << "flat_cost=" << (r.flat_cost ? "true" : "false") << "\n";
  out << "iterations=" << r.iterations << "\n";
}

}  // namespace awe
