#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "proxmon/errors.hpp"
#include "proxmon/geometry.hpp"

using namespace proxmon;
using namespace proxmon::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

UnitQuaternion random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return UnitQuaternion::from_wxyz(n(rng), n(rng), n(rng), n(rng));
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

CameraModel test_camera() {
  CameraModel cam;
  cam.intrinsic = make_intrinsic(1000, 1000, 960, 540);
  cam.image_width = 1920;
  cam.image_height = 1080;
  return cam;
}

Box3D sensor_box(Vec3 c, BoxSize s = {0.5, 1.8, 0.02},
                 UnitQuaternion q = UnitQuaternion::identity()) {
  return {c, s, q, Frame::Sensor};
}

Box3D facing(const Vec3& forward) {
  // Rotation taking local +z onto `forward`.
  const Vec3 z(0, 0, 1);
  const Vec3 f = forward.normalized();
  const Vec3 axis = z.cross(f);
  const double angle = std::atan2(axis.norm(), z.dot(f));
  UnitQuaternion q = axis.norm() < 1e-12
                         ? (f.z() > 0 ? UnitQuaternion::identity()
                                      : UnitQuaternion::from_axis_angle(Vec3(0, 1, 0), kPi))
                         : UnitQuaternion::from_axis_angle(axis.normalized(), angle);
  return sensor_box(Vec3(0, 0, 5), {0.5, 1.8, 0.3}, q);
}

}  // namespace

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  Pose p{random_vec(rng, 10), random_rotation(rng)};
  Pose c = compose(Pose::identity(), p);
  EXPECT_TRUE(c.translation.isApprox(p.translation, 1e-12));
  EXPECT_TRUE(c.rotation.approx_equal(p.rotation, 1e-12));
}

TEST(Compose, WithInverseIsIdentity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    Pose p{random_vec(rng, 50), random_rotation(rng)};
    Pose c = compose(p, p.inverse());
    EXPECT_LT(c.translation.norm(), 1e-9);
    EXPECT_TRUE(c.rotation.approx_equal(UnitQuaternion::identity(), 1e-9));
  }
}

TEST(Compose, PureTranslationsAdd) {
  Pose c = compose(Pose::translate(1, 0, 0), Pose::translate(0, 2, 0));
  EXPECT_EQ(c.translation, Vec3(1, 2, 0));
}

TEST(Compose, AppliesRightOperandFirst) {
  Pose a{Vec3(1, 0, 0), UnitQuaternion::from_yaw(kPi / 2)};
  Pose b{Vec3(0, 0, 3), UnitQuaternion::from_yaw(0.3)};
  Vec3 p(0.2, -0.7, 1.1);
  EXPECT_TRUE(compose(a, b).apply(p).isApprox(a.apply(b.apply(p)), 1e-12));
}

TEST(Quaternion, FromYawTurnsForwardClockwiseFromAbove) {
  Vec3 f = UnitQuaternion::from_yaw(kPi / 2).rotate(Vec3(0, 0, 1));
  EXPECT_NEAR(f.x(), 1.0, 1e-12);
  EXPECT_NEAR(f.z(), 0.0, 1e-12);
}

TEST(Quaternion, ZeroNormRejected) {
  EXPECT_THROW(UnitQuaternion::from_wxyz(0, 0, 0, 0), InvalidRecord);
}

TEST(Quaternion, RotationPreservesNorm) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    Vec3 v = random_vec(rng, 100);
    Vec3 r = random_rotation(rng).rotate(v);
    EXPECT_NEAR(r.norm() / v.norm(), 1.0, 1e-12);
  }
}

TEST(SensorFrame, IdentityExtrinsic) {
  CameraModel cam = test_camera();
  Box3D b{Vec3(0, 0, 5), {1, 1, 1}, {}, Frame::Global};
  EXPECT_EQ(to_sensor_frame(b, cam).center, Vec3(0, 0, 5));
  EXPECT_EQ(to_sensor_frame(b, cam).frame, Frame::Sensor);
}

TEST(SensorFrame, PureTranslation) {
  CameraModel cam = test_camera();
  cam.extrinsic = Pose::translate(0, 0, 5);
  Box3D b{Vec3(0, 0, 5), {1, 1, 1}, {}, Frame::Global};
  EXPECT_LT(to_sensor_frame(b, cam).center.norm(), 1e-12);
}

TEST(SensorFrame, RandomRoundTrip) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    CameraModel cam = test_camera();
    cam.extrinsic = {random_vec(rng, 200), random_rotation(rng)};
    Box3D b{random_vec(rng, 200), {0.5, 1.7, 0.4}, random_rotation(rng), Frame::Global};
    Box3D back = to_global_frame(to_sensor_frame(b, cam), cam);
    EXPECT_LT((back.center - b.center).norm(), 1e-9);
    EXPECT_TRUE(back.rotation.approx_equal(b.rotation, 1e-9));
    EXPECT_EQ(back.size.height, b.size.height);
  }
}

TEST(SensorFrame, WrongFrameRejected) {
  CameraModel cam = test_camera();
  EXPECT_THROW(to_sensor_frame(sensor_box(Vec3(0, 0, 5)), cam), InvariantViolation);
  Box3D g{Vec3(0, 0, 5), {1, 1, 1}, {}, Frame::Global};
  EXPECT_THROW(to_global_frame(g, cam), InvariantViolation);
}

TEST(BoxCorners, UnitCube) {
  Box3D b{Vec3::Zero(), {1, 1, 1}, {}, Frame::Sensor};
  auto c = box_corners(b);
  EXPECT_EQ(c[0], Vec3(-0.5, -0.5, -0.5));
  EXPECT_EQ(c[1], Vec3(0.5, -0.5, -0.5));
  EXPECT_EQ(c[2], Vec3(0.5, -0.5, 0.5));
  EXPECT_EQ(c[3], Vec3(-0.5, -0.5, 0.5));
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(c[i + 4], Vec3(c[i].x(), 0.5, c[i].z()));
  }
}

TEST(BoxCorners, BottomFaceCounterclockwiseFromAbove) {
  Box3D b{Vec3::Zero(), {2, 1, 3}, {}, Frame::Sensor};
  auto c = box_corners(b);
  // Top view with x to the right and z up the page; positive shoelace area.
  double area = 0;
  for (int i = 0; i < 4; ++i) {
    const Vec3& p = c[i];
    const Vec3& q = c[(i + 1) % 4];
    area += p.x() * q.z() - q.x() * p.z();
  }
  EXPECT_GT(area, 0.0);
}

TEST(BoxCorners, TranslationAndRotationEquivariance) {
  std::mt19937_64 rng(5);
  BoxSize s{0.6, 1.7, 0.4};
  Box3D base{Vec3::Zero(), s, {}, Frame::Sensor};
  auto c0 = box_corners(base);
  for (int i = 0; i < 20; ++i) {
    Vec3 t = random_vec(rng, 30);
    UnitQuaternion q = random_rotation(rng);
    auto c = box_corners({t, s, q, Frame::Sensor});
    Vec3 centroid = Vec3::Zero();
    for (int k = 0; k < 8; ++k) {
      EXPECT_LT((c[k] - (q.rotate(c0[k]) + t)).norm(), 1e-12);
      centroid += c[k];
    }
    EXPECT_LT((centroid / 8.0 - t).norm(), 1e-12);
  }
}

TEST(Projection, OpticalAxis) {
  auto px = project_point(Vec3(0, 0, 10), test_camera());
  ASSERT_TRUE(px);
  EXPECT_DOUBLE_EQ(px->u, 960);
  EXPECT_DOUBLE_EQ(px->v, 540);
}

TEST(Projection, LateralOffset) {
  auto px = project_point(Vec3(1, 0, 10), test_camera());
  ASSERT_TRUE(px);
  EXPECT_DOUBLE_EQ(px->u, 1060);
  EXPECT_DOUBLE_EQ(px->v, 540);
}

TEST(Projection, UpIsSmallerV) {
  auto px = project_point(Vec3(0, 1, 10), test_camera());
  ASSERT_TRUE(px);
  EXPECT_DOUBLE_EQ(px->v, 440);
}

TEST(Projection, BehindCamera) {
  EXPECT_FALSE(project_point(Vec3(0, 0, -1), test_camera()));
  EXPECT_FALSE(project_point(Vec3(0, 0, 0), test_camera()));
}

TEST(Projection, ScaleConsistent) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> lam(0.1, 50);
  for (int i = 0; i < 100; ++i) {
    Vec3 p = random_vec(rng, 5);
    p.z() = std::abs(p.z()) + 0.5;
    double l = lam(rng);
    auto a = project_point(p, test_camera());
    auto b = project_point(l * p, test_camera());
    ASSERT_TRUE(a && b);
    EXPECT_NEAR(a->u, b->u, 1e-9);
    EXPECT_NEAR(a->v, b->v, 1e-9);
  }
}

TEST(ProjectedHeight, UprightBoxAtTwentyMeters) {
  // Nearest face at z - l/2 spans fy * h / (z - l/2) pixels.
  const double l = 0.02;
  auto h = projected_box_height_px(sensor_box(Vec3(0, 0, 20), {0.5, 1.8, l}), test_camera());
  ASSERT_TRUE(h);
  EXPECT_NEAR(*h, 1000.0 * 1.8 / (20.0 - l / 2), 1e-9);
  EXPECT_NEAR(*h, 90.0, 0.1);
}

TEST(ProjectedHeight, UprightBoxAtFortyThreeMeters) {
  auto h = projected_box_height_px(sensor_box(Vec3(0, 0, 43)), test_camera());
  ASSERT_TRUE(h);
  EXPECT_NEAR(*h, 41.9, 0.05);
  EXPECT_LT(*h, 42.0);
}

TEST(ProjectedHeight, CornerBehindCamera) {
  // Nearest corners at z = -0.1.
  auto h = projected_box_height_px(sensor_box(Vec3(0, 0, 0.4), {0.5, 1.8, 1.0}), test_camera());
  EXPECT_FALSE(h);
}

TEST(SignedGroundAngle, AlongCameraX) {
  EXPECT_NEAR(signed_ground_angle(facing(Vec3(1, 0, 0))), 0.0, 1e-12);
}

TEST(SignedGroundAngle, FacingCameraIsPositive) {
  EXPECT_NEAR(signed_ground_angle(facing(Vec3(0, 0, -1))), kPi / 2, 1e-12);
}

TEST(SignedGroundAngle, FacingAwayIsNegative) {
  EXPECT_NEAR(signed_ground_angle(facing(Vec3(0, 0, 1))), -kPi / 2, 1e-12);
}

TEST(SignedGroundAngle, IgnoresPitchComponent) {
  EXPECT_NEAR(signed_ground_angle(facing(Vec3(1, 0.5, -1))), kPi / 4, 1e-12);
}

TEST(SignedGroundAngle, VerticalForwardIsDegenerate) {
  EXPECT_THROW(signed_ground_angle(facing(Vec3(0, 1, 0))), DegenerateOrientation);
}

TEST(SignedGroundAngle, GroundRotationByDeltaShiftsThetaByMinusDelta) {
  // Counterclockwise rotation of the ground-plane forward vector (x right,
  // z up the page) by delta lowers theta by delta.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const double a = ang(rng);
    const double delta = ang(rng);
    Vec3 d(std::cos(a), 0, std::sin(a));
    Vec3 r(std::cos(a + delta), 0, std::sin(a + delta));
    const double t0 = signed_ground_angle(facing(d));
    const double t1 = signed_ground_angle(facing(r));
    EXPECT_NEAR(wrap_angle(t1 - t0 + delta), 0.0, 1e-9);
  }
}

TEST(SignedGroundAngle, YawQuaternionShiftsThetaByPlusDelta) {
  // from_yaw turns clockwise viewed from above, the opposite sense.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const double yaw = ang(rng);
    const double delta = ang(rng);
    Box3D b = sensor_box(Vec3(2, 0, 9), {0.5, 1.8, 0.3}, UnitQuaternion::from_yaw(yaw));
    Box3D r = b;
    r.rotation = UnitQuaternion::from_yaw(delta) * b.rotation;
    EXPECT_NEAR(wrap_angle(signed_ground_angle(r) - signed_ground_angle(b) - delta), 0.0, 1e-9);
  }
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-12);
  EXPECT_DOUBLE_EQ(wrap_angle(0.25), 0.25);
}

TEST(CameraModel, ValidateRejectsBadIntrinsics) {
  CameraModel cam = test_camera();
  EXPECT_NO_THROW(cam.validate());
  cam.intrinsic(0, 0) = 0;
  EXPECT_THROW(cam.validate(), ConfigError);
}
