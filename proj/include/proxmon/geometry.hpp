#pragma once

// Frames, poses and camera geometry.
//
// All frames are left-handed with +y up. The camera (sensor) frame looks
// down +z with +x to the right of the image, so the ground plane is x-z.
// Quaternions are stored (w, x, y, z) and act on coordinates with the usual
// Hamilton product; a positive rotation about +y turns +z toward +x, which
// is clockwise when the ground plane is viewed from above.

#include <array>
#include <cmath>
#include <optional>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace proxmon::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  // Normalizes the input. Throws InvalidRecord on a zero or non-finite norm.
  static UnitQuaternion from_wxyz(double w, double x, double y, double z);
  static UnitQuaternion identity() { return {}; }
  // Rotation about the vertical (+y) axis.
  static UnitQuaternion from_yaw(double yaw);
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  Vec3 rotate(const Vec3& v) const { return q_ * v; }
  Mat3 matrix() const { return q_.toRotationMatrix(); }
  UnitQuaternion inverse() const { return UnitQuaternion(q_.conjugate()); }
  UnitQuaternion operator*(const UnitQuaternion& o) const {
    return UnitQuaternion((q_ * o.q_).normalized());
  }

  // Same rotation (q and -q are equal) within tol.
  bool approx_equal(const UnitQuaternion& o, double tol) const;

 private:
  explicit UnitQuaternion(const Eigen::Quaterniond& q) : q_(q) {}
  Eigen::Quaterniond q_ = Eigen::Quaterniond::Identity();
};

struct Pose {
  Vec3 translation = Vec3::Zero();
  UnitQuaternion rotation;

  static Pose identity() { return {}; }
  static Pose translate(double x, double y, double z) { return {Vec3(x, y, z), {}}; }

  // Maps a point expressed in this pose's local frame into the parent frame.
  Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
  Pose inverse() const;
};

// a∘b: applies b first, then a.
Pose compose(const Pose& a, const Pose& b);

enum class Frame { Global, Sensor };

// Extents along the box's local axes: width on x, height on y, length on z.
// Local +z is the forward (torso) direction.
struct BoxSize {
  double width = 0.0;
  double height = 0.0;
  double length = 0.0;

  bool valid() const { return width > 0.0 && height > 0.0 && length > 0.0; }
  double volume() const { return width * height * length; }
};

struct Box3D {
  Vec3 center = Vec3::Zero();
  BoxSize size;
  UnitQuaternion rotation;
  Frame frame = Frame::Sensor;
};

struct CameraModel {
  Mat3 intrinsic = Mat3::Identity();
  int image_width = 0;
  int image_height = 0;
  // Sensor pose in the global frame.
  Pose extrinsic;

  double fx() const { return intrinsic(0, 0); }
  double fy() const { return intrinsic(1, 1); }
  double cx() const { return intrinsic(0, 2); }
  double cy() const { return intrinsic(1, 2); }

  // Throws ConfigError unless fx, fy > 0 and the principal point lies inside the image.
  void validate() const;
};

Mat3 make_intrinsic(double fx, double fy, double cx, double cy, double skew = 0.0);

// Global -> sensor. Requires box.frame == Global.
Box3D to_sensor_frame(const Box3D& box, const CameraModel& cam);
// Sensor -> global. Requires box.frame == Sensor.
Box3D to_global_frame(const Box3D& box, const CameraModel& cam);

// Corner order: bottom face (local y = -h/2) then top face, each running
// (-x,-z), (+x,-z), (+x,+z), (-x,+z) in local coordinates, which is
// counterclockwise seen from above with +x right and +z up the page.
std::array<Vec3, 8> box_corners(const Box3D& box);

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

// Pinhole projection of (x, -y, z) through the intrinsic matrix, so +y (up)
// decreases v. nullopt when z <= 0 (behind the camera).
std::optional<Pixel> project_point(const Vec3& p, const CameraModel& cam);

// max v - min v over the 8 projected corners; nullopt if any corner has z <= 0.
std::optional<double> projected_box_height_px(const Box3D& box, const CameraModel& cam);

// Planar distance sqrt(x^2 + z^2).
inline double ground_range(const Vec3& p) { return std::hypot(p.x(), p.z()); }

// Heading of the box's forward axis projected on the ground: atan2(f_x, f_z).
// Used to reduce general rotations to yaw. Throws DegenerateOrientation when
// the forward axis is vertical.
double ground_yaw(const UnitQuaternion& rotation);

inline constexpr double kDegenerateForwardTol = 1e-9;

// Signed angle between the box's forward axis and the camera's +x axis,
// theta = atan2(-d_z, d_x) in (-pi, pi]. Positive means heading toward the
// camera. Throws DegenerateOrientation when the forward axis is vertical.
double signed_ground_angle(const Box3D& box);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace proxmon::geometry
