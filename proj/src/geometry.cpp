#include "proxmon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "proxmon/errors.hpp"

namespace proxmon::geometry {

UnitQuaternion UnitQuaternion::from_wxyz(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw InvalidRecord("quaternion has zero or non-finite norm");
  }
  // Already unit up to rounding: keep the components so that write/read
  // cycles are bit-exact.
  if (std::abs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) {
    return UnitQuaternion(Eigen::Quaterniond(w, x, y, z));
  }
  return UnitQuaternion(Eigen::Quaterniond(w / n, x / n, y / n, z / n));
}

UnitQuaternion UnitQuaternion::from_yaw(double yaw) {
  return UnitQuaternion(Eigen::Quaterniond(std::cos(yaw / 2), 0.0, std::sin(yaw / 2), 0.0));
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  return UnitQuaternion(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
}

bool UnitQuaternion::approx_equal(const UnitQuaternion& o, double tol) const {
  const double d = std::abs(q_.dot(o.q_));
  return 1.0 - d <= tol;
}

Pose Pose::inverse() const {
  const UnitQuaternion inv = rotation.inverse();
  return {-inv.rotate(translation), inv};
}

Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation.rotate(b.translation) + a.translation, a.rotation * b.rotation};
}

void CameraModel::validate() const {
  std::ostringstream oss;
  if (!(fx() > 0.0) || !(fy() > 0.0)) {
    oss << "focal lengths must be positive (fx=" << fx() << ", fy=" << fy() << ")";
  } else if (image_width <= 0 || image_height <= 0) {
    oss << "image size must be positive (" << image_width << "x" << image_height << ")";
  } else if (!(cx() > 0.0 && cx() < image_width) || !(cy() > 0.0 && cy() < image_height)) {
    oss << "principal point (" << cx() << ", " << cy() << ") outside the image";
  } else {
    return;
  }
  throw ConfigError(oss.str());
}

Mat3 make_intrinsic(double fx, double fy, double cx, double cy, double skew) {
  Mat3 k;
  k << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

Box3D to_sensor_frame(const Box3D& box, const CameraModel& cam) {
  if (box.frame != Frame::Global) {
    throw InvariantViolation("to_sensor_frame expects a global-frame box");
  }
  const Pose inv = cam.extrinsic.inverse();
  return {inv.apply(box.center), box.size, inv.rotation * box.rotation, Frame::Sensor};
}

Box3D to_global_frame(const Box3D& box, const CameraModel& cam) {
  if (box.frame != Frame::Sensor) {
    throw InvariantViolation("to_global_frame expects a sensor-frame box");
  }
  return {cam.extrinsic.apply(box.center), box.size, cam.extrinsic.rotation * box.rotation,
          Frame::Global};
}

std::array<Vec3, 8> box_corners(const Box3D& box) {
  const double hw = box.size.width / 2;
  const double hh = box.size.height / 2;
  const double hl = box.size.length / 2;
  static constexpr double kSx[4] = {-1, 1, 1, -1};
  static constexpr double kSz[4] = {-1, -1, 1, 1};
  const Mat3 r = box.rotation.matrix();
  std::array<Vec3, 8> out;
  for (int face = 0; face < 2; ++face) {
    const double y = face == 0 ? -hh : hh;
    for (int i = 0; i < 4; ++i) {
      out[face * 4 + i] = r * Vec3(kSx[i] * hw, y, kSz[i] * hl) + box.center;
    }
  }
  return out;
}

std::optional<Pixel> project_point(const Vec3& p, const CameraModel& cam) {
  if (!(p.z() > 0.0)) return std::nullopt;
  const Vec3 h = cam.intrinsic * Vec3(p.x(), -p.y(), p.z());
  return Pixel{h.x() / h.z(), h.y() / h.z()};
}

std::optional<double> projected_box_height_px(const Box3D& box, const CameraModel& cam) {
  if (box.frame != Frame::Sensor) {
    throw InvariantViolation("projected_box_height_px expects a sensor-frame box");
  }
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (const Vec3& c : box_corners(box)) {
    const auto px = project_point(c, cam);
    if (!px) return std::nullopt;
    vmin = std::min(vmin, px->v);
    vmax = std::max(vmax, px->v);
  }
  return vmax - vmin;
}

namespace {

Vec3 ground_forward(const UnitQuaternion& rotation) {
  const Vec3 f = rotation.rotate(Vec3::UnitZ());
  const double n = std::hypot(f.x(), f.z());
  if (n < kDegenerateForwardTol) {
    throw DegenerateOrientation("forward axis is vertical; ground-plane angle undefined");
  }
  return {f.x() / n, 0.0, f.z() / n};
}

}  // namespace

double ground_yaw(const UnitQuaternion& rotation) {
  const Vec3 d = ground_forward(rotation);
  return std::atan2(d.x(), d.z());
}

double signed_ground_angle(const Box3D& box) {
  const Vec3 d = ground_forward(box.rotation);
  return wrap_angle(std::atan2(-d.z(), d.x()));
}

double wrap_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::remainder(a, 2 * kPi);
  if (a <= -kPi) a += 2 * kPi;
  return a;
}

}  // namespace proxmon::geometry
