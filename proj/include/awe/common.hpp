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

// Shared vector type, angle helpers and the library's exception hierarchy.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace awe {

inline constexpr double kPi = std::numbers::pi;

/// Ground speed below which divisions by |p_dot| are not evaluated [m/s].
inline constexpr double kMinGroundSpeed = 0.5;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 &operator+=(const Vec3 &o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3 &) const = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double norm_xy() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

inline double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Error hierarchy. Every failure the library reports derives from awe::Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateSpeed : public Error {
 public:
  explicit DegenerateSpeed(double speed)
      : Error("ground speed " + std::to_string(speed) + " m/s is below the minimum of " +
              std::to_string(kMinGroundSpeed) + " m/s") {}
};

class OutOfRangeCompression : public Error {
 public:
  using Error::Error;
};

class ZeroGain : public Error {
 public:
  using Error::Error;
};

class UnstableRequest : public Error {
 public:
  using Error::Error;
};

class NonFiniteCost : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invariant breach on a named configuration key.
class ValidationError : public Error {
 public:
  ValidationError(std::string key, std::string reason)
      : Error(key + ": " + reason), key_(std::move(key)), reason_(std::move(reason)) {}

  const std::string &key() const { return key_; }
  const std::string &reason() const { return reason_; }

 private:
  std::string key_;
  std::string reason_;
};

class ScenarioInvalid : public Error {
 public:
  using Error::Error;
};

}  // namespace awe
