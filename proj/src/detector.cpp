#include "proxmon/detector.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "json_util.hpp"

namespace proxmon::detector {

using detail::Json;
using geometry::UnitQuaternion;
using geometry::Vec3;

double DetectionCurve::operator()(double r) const {
  switch (kind) {
    case Kind::Constant:
      return p_max;
    case Kind::Logistic:
      return p_max / (1.0 + std::exp((r - r_half) / scale));
    case Kind::Piecewise: {
      if (knots.empty()) return 0.0;
      if (r <= knots.front().first) return knots.front().second;
      for (std::size_t i = 1; i < knots.size(); ++i) {
        const auto& [r1, p1] = knots[i];
        if (r <= r1) {
          const auto& [r0, p0] = knots[i - 1];
          return p0 + (p1 - p0) * (r - r0) / (r1 - r0);
        }
      }
      return knots.back().second;
    }
  }
  return 0.0;
}

void NoiseModel::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("noise model: " + m); };
  for (double s : {depth_sigma_base, depth_sigma_slope, lateral_sigma, size_sigma, heading_sigma,
                   score_jitter}) {
    if (!(s >= 0.0)) fail("sigmas must be non-negative");
  }
  for (double p : {flip_probability, flip_negative_bias, detection.p_max}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (!(false_positive_rate >= 0.0)) fail("false-positive rate must be non-negative");
  if (!(false_positive_max_range > 1.0)) fail("false-positive range must exceed 1 m");
  if (detection.kind == DetectionCurve::Kind::Logistic && !(detection.scale > 0.0)) {
    fail("logistic scale must be positive");
  }
  for (std::size_t i = 0; i < detection.knots.size(); ++i) {
    const auto& [r, p] = detection.knots[i];
    if (!(p >= 0.0 && p <= 1.0)) fail("detection knot probability outside [0, 1]");
    if (i > 0 && !(r > detection.knots[i - 1].first)) fail("detection knots must increase");
  }
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinDepth = 0.1;

std::mt19937_64 frame_rng(std::uint64_t seed, std::int64_t frame_index) {
  const auto f = static_cast<std::uint64_t>(frame_index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(f >> 32)};
  return std::mt19937_64(seq);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Rotation that mirrors the ground-projected forward axis across the camera
// x axis, i.e. theta -> -theta.
UnitQuaternion mirror_heading(const UnitQuaternion& q) {
  const double yaw = geometry::ground_yaw(q);
  return UnitQuaternion::from_yaw(kPi - 2.0 * yaw) * q;
}

double half_fov(const geometry::CameraModel& cam) {
  return std::min(std::atan2(cam.cx(), cam.fx()), std::atan2(cam.image_width - cam.cx(), cam.fx()));
}

}  // namespace

std::vector<Detection> perturb(std::span<const dataset::BoxRecord> gt,
                               const geometry::CameraModel& cam, const NoiseModel& nm,
                               std::int64_t frame_index) {
  nm.validate();
  std::mt19937_64 rng = frame_rng(nm.seed, frame_index);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);

  std::vector<Detection> out;
  out.reserve(gt.size());
  for (const dataset::BoxRecord& rec : gt) {
    // Every draw happens for every box so that the streams of later boxes
    // do not depend on earlier outcomes.
    const double u_keep = u01(rng);
    const double e_depth = n01(rng);
    const double e_x = n01(rng);
    const double e_y = n01(rng);
    const double e_w = n01(rng);
    const double e_h = n01(rng);
    const double e_l = n01(rng);
    const double e_yaw = n01(rng);
    const double u_flip = u01(rng);
    const double u_dir = u01(rng);
    const double e_score = n01(rng);

    const double r = geometry::ground_range(rec.translation);
    if (!(u_keep < nm.detection(r))) continue;

    geometry::Box3D box = rec.box();
    const double sigma_d = nm.depth_sigma_base + nm.depth_sigma_slope * r;
    if (sigma_d > 0.0 && box.center.z() > 0.0) {
      const double z = std::max(box.center.z() + sigma_d * e_depth, kMinDepth);
      box.center *= z / box.center.z();
    }
    box.center.x() += nm.lateral_sigma * e_x;
    box.center.y() += nm.lateral_sigma * e_y;
    if (nm.size_sigma > 0.0) {
      box.size.width *= std::max(1.0 + nm.size_sigma * e_w, 0.1);
      box.size.height *= std::max(1.0 + nm.size_sigma * e_h, 0.1);
      box.size.length *= std::max(1.0 + nm.size_sigma * e_l, 0.1);
    }
    if (nm.heading_sigma > 0.0) {
      box.rotation = UnitQuaternion::from_yaw(nm.heading_sigma * e_yaw) * box.rotation;
    }
    if (u_flip < nm.flip_probability) {
      try {
        const bool positive = geometry::signed_ground_angle(box) >= 0.0;
        const bool mirror = positive ? u_dir < nm.flip_negative_bias
                                     : u_dir < 1.0 - nm.flip_negative_bias;
        if (mirror) box.rotation = mirror_heading(box.rotation);
      } catch (const DegenerateOrientation&) {
      }
    }
    const double score = clamp01(nm.score_base - nm.score_slope * r + nm.score_jitter * e_score);
    out.push_back({box, score});
  }

  if (nm.false_positive_rate > 0.0) {
    const int n_fp = std::poisson_distribution<int>(nm.false_positive_rate)(rng);
    const double fov = half_fov(cam);
    // Ground level in the sensor frame for a level camera.
    const double ground_y = -cam.extrinsic.translation.y();
    for (int i = 0; i < n_fp; ++i) {
      const double r = 1.0 + (nm.false_positive_max_range - 1.0) * u01(rng);
      const double bearing = fov * (2.0 * u01(rng) - 1.0);
      geometry::BoxSize size{0.6 * (1.0 + 0.1 * n01(rng)), 1.75 * (1.0 + 0.05 * n01(rng)),
                             0.4 * (1.0 + 0.1 * n01(rng))};
      size.width = std::max(size.width, 0.1);
      size.height = std::max(size.height, 0.1);
      size.length = std::max(size.length, 0.1);
      const double yaw = kPi * (2.0 * u01(rng) - 1.0);
      const double score =
          clamp01(nm.false_positive_score_base - nm.score_slope * r + nm.score_jitter * n01(rng));
      geometry::Box3D box{Vec3(r * std::sin(bearing), ground_y + size.height / 2,
                               r * std::cos(bearing)),
                          size, UnitQuaternion::from_yaw(yaw), geometry::Frame::Sensor};
      out.push_back({box, score});
    }
  }
  return out;
}

NoiseModel calibrate_preset(std::string_view name) {
  NoiseModel nm;
  if (name == "perfect") return nm;
  if (name == "paper-trend") {
    nm.depth_sigma_base = 0.02;
    nm.depth_sigma_slope = 0.006;
    nm.lateral_sigma = 0.02;
    nm.size_sigma = 0.04;
    nm.heading_sigma = 0.2;
    nm.flip_probability = 0.3;
    nm.flip_negative_bias = 0.9;
    nm.detection.kind = DetectionCurve::Kind::Logistic;
    nm.detection.p_max = 0.95;
    nm.detection.r_half = 40.0;
    nm.detection.scale = 4.0;
    nm.false_positive_rate = 0.3;
    nm.score_base = 0.9;
    nm.score_slope = 0.008;
    nm.score_jitter = 0.05;
    nm.false_positive_score_base = 0.4;
    return nm;
  }
  if (name == "stress") {
    nm.depth_sigma_base = 0.1;
    nm.depth_sigma_slope = 0.03;
    nm.lateral_sigma = 0.1;
    nm.size_sigma = 0.15;
    nm.heading_sigma = 0.6;
    nm.flip_probability = 0.5;
    nm.flip_negative_bias = 0.9;
    nm.detection.kind = DetectionCurve::Kind::Logistic;
    nm.detection.p_max = 0.8;
    nm.detection.r_half = 25.0;
    nm.detection.scale = 5.0;
    nm.false_positive_rate = 2.0;
    nm.score_base = 0.8;
    nm.score_slope = 0.01;
    nm.score_jitter = 0.15;
    nm.false_positive_score_base = 0.6;
    return nm;
  }
  throw UnknownPreset("unknown noise preset \"" + std::string(name) + "\"");
}

std::vector<std::string> preset_names() { return {"perfect", "paper-trend", "stress"}; }

std::string describe(const NoiseModel& nm) {
  Json j = Json::object();
  j["depth_sigma_base"] = nm.depth_sigma_base;
  j["depth_sigma_slope"] = nm.depth_sigma_slope;
  j["lateral_sigma"] = nm.lateral_sigma;
  j["size_sigma"] = nm.size_sigma;
  j["heading_sigma"] = nm.heading_sigma;
  j["flip_probability"] = nm.flip_probability;
  j["flip_negative_bias"] = nm.flip_negative_bias;
  Json curve = Json::object();
  switch (nm.detection.kind) {
    case DetectionCurve::Kind::Constant: curve["kind"] = "constant"; break;
    case DetectionCurve::Kind::Logistic: curve["kind"] = "logistic"; break;
    case DetectionCurve::Kind::Piecewise: curve["kind"] = "piecewise"; break;
  }
  curve["p_max"] = nm.detection.p_max;
  curve["r_half"] = nm.detection.r_half;
  curve["scale"] = nm.detection.scale;
  curve["knots"] = nm.detection.knots;
  j["detection"] = std::move(curve);
  j["false_positive_rate"] = nm.false_positive_rate;
  j["false_positive_max_range"] = nm.false_positive_max_range;
  j["score_base"] = nm.score_base;
  j["score_slope"] = nm.score_slope;
  j["score_jitter"] = nm.score_jitter;
  j["false_positive_score_base"] = nm.false_positive_score_base;
  j["seed"] = nm.seed;
  return j.dump();
}

std::string write_detections(std::span<const std::int64_t> frame_indices,
                             std::span<const std::vector<Detection>> per_frame) {
  if (frame_indices.size() != per_frame.size()) {
    throw InvariantViolation("write_detections: frame list and detections differ in length");
  }
  Json frames = Json::array();
  for (std::size_t i = 0; i < frame_indices.size(); ++i) {
    Json list = Json::array();
    for (const Detection& d : per_frame[i]) {
      if (!(d.score >= 0.0 && d.score <= 1.0) || !d.box.size.valid()) {
        throw InvalidRecord("detection with score outside [0, 1] or non-positive size");
      }
      Json jd = Json::object();
      jd["translation"] = detail::vec3_to_json(d.box.center);
      jd["size"] = detail::size_to_json(d.box.size);
      jd["rotation"] = detail::quat_to_json(d.box.rotation);
      jd["score"] = d.score;
      list.push_back(std::move(jd));
    }
    Json jf = Json::object();
    jf["frame_index"] = frame_indices[i];
    jf["detections"] = std::move(list);
    frames.push_back(std::move(jf));
  }
  Json doc = Json::object();
  doc["frames"] = std::move(frames);
  return detail::dump(doc);
}

std::vector<std::vector<Detection>> read_detections(std::string_view text,
                                                    std::span<const std::int64_t> frame_indices) {
  std::map<std::int64_t, std::size_t> slot;
  for (std::size_t i = 0; i < frame_indices.size(); ++i) slot.emplace(frame_indices[i], i);
  std::vector<std::vector<Detection>> out(frame_indices.size());

  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) return out;

  const Json doc = detail::parse_json(text, "detections");
  const Json& frames = detail::require(doc, "frames", "detections");
  if (!frames.is_array()) throw SchemaError("detections.frames must be an array");
  std::vector<bool> seen(frame_indices.size(), false);
  for (const Json& jf : frames) {
    const std::int64_t idx = detail::require_integer(jf, "frame_index", "detections frame");
    auto it = slot.find(idx);
    if (it == slot.end()) {
      throw FrameMismatch("detections refer to unknown frame_index " + std::to_string(idx));
    }
    if (seen[it->second]) {
      throw SchemaError("frame_index " + std::to_string(idx) + " listed twice");
    }
    seen[it->second] = true;
    const Json& list = detail::require(jf, "detections", "detections frame");
    if (!list.is_array()) throw SchemaError("detections frame: \"detections\" must be an array");
    auto& dst = out[it->second];
    for (const Json& jd : list) {
      constexpr std::string_view kWhere = "detection";
      Detection d;
      d.box.frame = geometry::Frame::Sensor;
      d.box.center = detail::vec3_from_json(detail::require(jd, "translation", kWhere),
                                            "detection.translation");
      try {
        d.box.size = detail::size_from_json(detail::require(jd, "size", kWhere), "detection.size");
        d.box.rotation = detail::quat_from_json(detail::require(jd, "rotation", kWhere),
                                                "detection.rotation", dataset::kQuaternionNormTol);
      } catch (const InvalidRecord& e) {
        throw SchemaError(e.what());
      }
      d.score = detail::require_number(jd, "score", kWhere);
      if (!(d.score >= 0.0 && d.score <= 1.0)) {
        throw SchemaError("detection score " + std::to_string(d.score) + " outside [0, 1]");
      }
      dst.push_back(d);
    }
  }
  return out;
}

std::vector<std::int64_t> frame_indices(const dataset::Dataset& ds) {
  std::vector<std::int64_t> out;
  out.reserve(ds.frames.size());
  for (const auto& f : ds.frames) out.push_back(f.frame_index);
  return out;
}

std::vector<std::vector<Detection>> detect_dataset(const dataset::Dataset& ds,
                                                   const NoiseModel& nm) {
  std::vector<std::vector<Detection>> out;
  out.reserve(ds.frames.size());
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    out.push_back(perturb(ds.frames[i].boxes, ds.camera(i), nm, ds.frames[i].frame_index));
  }
  return out;
}

}  // namespace proxmon::detector
