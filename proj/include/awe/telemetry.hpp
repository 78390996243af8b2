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

// Telemetry CSV, identification dataset CSV and run reports.
//
// Telemetry files start with a schema line "# awe-telemetry v1", then a
// header row with a fixed column order; numbers carry 9 significant digits.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "awe/sim_engine.hpp"
#include "awe/sysid.hpp"

namespace awe {

inline constexpr const char *kTelemetrySchema = "awe-telemetry v1";

const std::vector<std::string> &telemetry_columns();

/// Writes the schema line, the header and one row per sample. Returns the
/// number of data rows.
std::size_t write_telemetry(std::ostream &out, const std::vector<TelemetrySample> &samples);

std::string telemetry_csv(const std::vector<TelemetrySample> &samples);

/// 64-bit FNV-1a of the CSV bytes.
std::uint64_t telemetry_hash(const std::vector<TelemetrySample> &samples);
std::uint64_t fnv1a(const std::string &bytes);

/// Throws ParseError on a missing or mismatched schema line, a wrong header
/// or malformed rows.
std::vector<TelemetrySample> read_telemetry(std::istream &in);

/// Identification data: "# awe-iddata v1", "# sample_time=..", "# k_id=..",
/// then columns t,<ch>,<ch>_rate,<ch>_ref for each channel present.
struct IdChannels {
  double sample_time = 0.02;
  double k_id = 0.5;
  std::vector<std::string> names;  // "roll", "pitch"
  std::vector<IdDataset> data;
};

void write_id_csv(std::ostream &out, const IdChannels &channels);
IdChannels read_id_csv(std::istream &in);
/// Selects one channel. Throws ValidationError if absent.
IdDataset id_channel(const IdChannels &channels, const std::string &name);

void write_metrics_text(std::ostream &out, const RunMetrics &m, const std::string &name);
/// Line-delimited key=value with radians and SI units only.
void write_metrics_kv(std::ostream &out, const RunMetrics &m, const std::string &name);

void write_id_result_text(std::ostream &out, const IdResult &r, const std::string &channel);
void write_id_result_kv(std::ostream &out, const IdResult &r, const std::string &channel);

/// Fixed-precision number formatting used by every text output.
std::string format_g9(double v);

}  // namespace awe
