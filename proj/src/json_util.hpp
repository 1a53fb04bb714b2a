#pragma once

// Shared JSON helpers for the record readers and writers.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "proxmon/errors.hpp"
#include "proxmon/geometry.hpp"

namespace proxmon::detail {

using Json = nlohmann::ordered_json;

inline const Json& require(const Json& j, std::string_view key, std::string_view where) {
  if (!j.is_object()) {
    throw SchemaError(std::string(where) + ": expected an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string(where) + ": missing field \"" + std::string(key) + "\"");
  }
  return *it;
}

inline double require_number(const Json& j, std::string_view key, std::string_view where) {
  const Json& v = require(j, key, where);
  if (!v.is_number()) {
    throw SchemaError(std::string(where) + ": field \"" + std::string(key) + "\" must be a number");
  }
  return v.get<double>();
}

inline std::int64_t require_integer(const Json& j, std::string_view key, std::string_view where) {
  const Json& v = require(j, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError(std::string(where) + ": field \"" + std::string(key) +
                      "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

inline std::string require_string(const Json& j, std::string_view key, std::string_view where) {
  const Json& v = require(j, key, where);
  if (!v.is_string()) {
    throw SchemaError(std::string(where) + ": field \"" + std::string(key) + "\" must be a string");
  }
  return v.get<std::string>();
}

// Array of exactly n numbers.
inline void require_numbers(const Json& v, std::size_t n, double* out, std::string_view what) {
  if (!v.is_array() || v.size() != n) {
    throw SchemaError(std::string(what) + ": expected an array of " + std::to_string(n) +
                      " numbers");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_number()) {
      throw SchemaError(std::string(what) + ": element " + std::to_string(i) + " is not a number");
    }
    out[i] = v[i].get<double>();
  }
}

inline Json vec3_to_json(const geometry::Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline geometry::Vec3 vec3_from_json(const Json& v, std::string_view what) {
  double a[3];
  require_numbers(v, 3, a, what);
  return {a[0], a[1], a[2]};
}

inline Json quat_to_json(const geometry::UnitQuaternion& q) {
  return Json::array({q.w(), q.x(), q.y(), q.z()});
}

// Accepts |q| within kQuaternionNormTol of 1 and renormalizes.
inline geometry::UnitQuaternion quat_from_json(const Json& v, std::string_view what,
                                               double norm_tol) {
  double a[4];
  require_numbers(v, 4, a, what);
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
  if (!(std::abs(n - 1.0) <= norm_tol)) {
    throw InvalidRecord(std::string(what) + ": quaternion norm " + std::to_string(n) +
                        " is not unit");
  }
  return geometry::UnitQuaternion::from_wxyz(a[0], a[1], a[2], a[3]);
}

inline Json size_to_json(const geometry::BoxSize& s) {
  return Json::array({s.width, s.height, s.length});
}

inline geometry::BoxSize size_from_json(const Json& v, std::string_view what) {
  double a[3];
  require_numbers(v, 3, a, what);
  geometry::BoxSize s{a[0], a[1], a[2]};
  if (!s.valid()) {
    throw InvalidRecord(std::string(what) + ": size components must be positive");
  }
  return s;
}

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace proxmon::detail
