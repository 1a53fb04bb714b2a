#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "proxmon/dataset.hpp"
#include "proxmon/errors.hpp"
#include "temp_dir.hpp"

using namespace proxmon;
using namespace proxmon::dataset;
using geometry::UnitQuaternion;
using geometry::Vec3;

namespace {

FrameAnnotation sample_frame(int boxes = 1) {
  FrameAnnotation f;
  f.frame_index = 3;
  f.timestamp = 0.6;
  f.sensor.sensor_id = "camera_front";
  f.sensor.translation = Vec3(1.5, 2.25, -3.0);
  f.sensor.rotation = UnitQuaternion::from_yaw(0.3);
  f.sensor.camera_intrinsic = geometry::make_intrinsic(1000, 1000, 960, 540);
  for (int i = 0; i < boxes; ++i) {
    BoxRecord b;
    b.instance_id = 10 + i;
    b.translation = Vec3(0.1 * i + 0.3, -1.4, 7.123456789012345);
    b.size = {0.62, 1.75, 0.41};
    b.rotation = UnitQuaternion::from_yaw(-1.1 + i);
    f.boxes.push_back(b);
  }
  return f;
}

void expect_equal(const FrameAnnotation& a, const FrameAnnotation& b) {
  EXPECT_EQ(a.frame_index, b.frame_index);
  EXPECT_EQ(a.timestamp, b.timestamp);
  EXPECT_EQ(a.sensor.sensor_id, b.sensor.sensor_id);
  EXPECT_EQ(a.sensor.translation, b.sensor.translation);
  EXPECT_EQ(a.sensor.rotation.w(), b.sensor.rotation.w());
  EXPECT_EQ(a.sensor.rotation.y(), b.sensor.rotation.y());
  EXPECT_EQ(a.sensor.camera_intrinsic, b.sensor.camera_intrinsic);
  ASSERT_EQ(a.boxes.size(), b.boxes.size());
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    const auto& x = a.boxes[i];
    const auto& y = b.boxes[i];
    EXPECT_EQ(x.label_id, y.label_id);
    EXPECT_EQ(x.label_name, y.label_name);
    EXPECT_EQ(x.instance_id, y.instance_id);
    EXPECT_EQ(x.translation, y.translation);
    EXPECT_EQ(x.size.width, y.size.width);
    EXPECT_EQ(x.size.height, y.size.height);
    EXPECT_EQ(x.size.length, y.size.length);
    EXPECT_EQ(x.rotation.w(), y.rotation.w());
    EXPECT_EQ(x.rotation.x(), y.rotation.x());
    EXPECT_EQ(x.rotation.y(), y.rotation.y());
    EXPECT_EQ(x.rotation.z(), y.rotation.z());
  }
}

const char* kHandWritten = R"({
  "frame_index": 0,
  "timestamp": 0.0,
  "sensor": {
    "sensor_id": "camera_front",
    "translation": [0.0, 2.5, 3.0],
    "rotation": [1.0, 0.0, 0.0, 0.0],
    "camera_intrinsic": [[1000.0, 0.0, 960.0], [0.0, 1000.0, 540.0], [0.0, 0.0, 1.0]]
  },
  "annotations": [
    {
      "label_id": 1,
      "label_name": "Worker",
      "instance_id": 42,
      "translation": [1.0, -1.6, 12.5],
      "size": [0.6, 1.8, 0.4],
      "rotation": [0.0, 0.0, 1.0, 0.0]
    }
  ]
})";

}  // namespace

TEST(WriteFrame, EmptyFrame) {
  FrameAnnotation f = sample_frame(0);
  const std::string text = frame_to_string(f);
  EXPECT_NE(text.find("\"sensor\""), std::string::npos);
  EXPECT_NE(text.find("\"annotations\": []"), std::string::npos);
  expect_equal(frame_from_string(text), f);
}

TEST(WriteFrame, OneBoxRoundTrip) {
  FrameAnnotation f = sample_frame(1);
  expect_equal(frame_from_string(frame_to_string(f)), f);
}

TEST(WriteFrame, ByteDeterministic) {
  FrameAnnotation f = sample_frame(3);
  std::ostringstream a;
  std::ostringstream b;
  const auto na = write_frame(f, a);
  write_frame(f, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(na, a.str().size());
}

TEST(WriteFrame, ReadWriteIsIdentityOnText) {
  FrameAnnotation f = sample_frame(4);
  const std::string once = frame_to_string(f);
  EXPECT_EQ(frame_to_string(frame_from_string(once)), once);
}

TEST(WriteFrame, RandomFloatsRoundTripExactly) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-100, 100);
  std::normal_distribution<double> n;
  for (int i = 0; i < 200; ++i) {
    FrameAnnotation f = sample_frame(2);
    f.timestamp = std::abs(u(rng));
    f.sensor.translation = Vec3(u(rng), u(rng), u(rng));
    f.sensor.rotation = UnitQuaternion::from_wxyz(n(rng), n(rng), n(rng), n(rng));
    f.boxes[1].translation = Vec3(u(rng), u(rng), u(rng));
    f.boxes[1].rotation = UnitQuaternion::from_wxyz(n(rng), n(rng), n(rng), n(rng));
    expect_equal(frame_from_string(frame_to_string(f)), f);
  }
}

TEST(WriteFrame, InvalidRecordRejected) {
  FrameAnnotation f = sample_frame(1);
  f.boxes[0].size.width = 0;
  std::ostringstream out;
  EXPECT_THROW(write_frame(f, out), InvalidRecord);
}

TEST(ReadFrame, HandWrittenDocument) {
  FrameAnnotation f = frame_from_string(kHandWritten);
  ASSERT_EQ(f.boxes.size(), 1u);
  const BoxRecord& b = f.boxes[0];
  EXPECT_EQ(b.label_id, 1);
  EXPECT_EQ(b.label_name, "Worker");
  EXPECT_EQ(b.instance_id, 42);
  EXPECT_EQ(b.translation, Vec3(1.0, -1.6, 12.5));
  EXPECT_EQ(b.size.width, 0.6);
  EXPECT_EQ(b.size.height, 1.8);
  EXPECT_EQ(b.size.length, 0.4);
  EXPECT_EQ(b.rotation.y(), 1.0);
  EXPECT_EQ(f.sensor.sensor_id, "camera_front");
  EXPECT_EQ(f.sensor.camera_intrinsic(0, 2), 960.0);
}

TEST(ReadFrame, QuaternionNormOffRejected) {
  std::string doc = kHandWritten;
  doc.replace(doc.find("[0.0, 0.0, 1.0, 0.0]"), 20, "[0.0, 0.0, 0.9, 0.0]");
  EXPECT_THROW(frame_from_string(doc), InvalidRecord);
}

TEST(ReadFrame, NearUnitQuaternionRenormalized) {
  std::string doc = kHandWritten;
  doc.replace(doc.find("[0.0, 0.0, 1.0, 0.0]"), 20, "[0.0, 0.0, 1.0000004, 0.0]");
  FrameAnnotation f = frame_from_string(doc);
  EXPECT_NEAR(f.boxes[0].rotation.y(), 1.0, 1e-15);
}

TEST(ReadFrame, MissingInstanceIdIsSchemaError) {
  std::string doc = kHandWritten;
  doc.replace(doc.find("\"instance_id\": 42,"), 18, "");
  EXPECT_THROW(frame_from_string(doc), SchemaError);
}

TEST(ReadFrame, RenamedFieldIsSchemaError) {
  std::string doc = kHandWritten;
  doc.replace(doc.find("\"sensor_id\""), 11, "\"sensorId\"");
  EXPECT_THROW(frame_from_string(doc), SchemaError);
}

TEST(ReadFrame, MalformedIsParseError) {
  EXPECT_THROW(frame_from_string("{\"frame_index\": "), ParseError);
}

TEST(ReadFrame, NonPositiveSizeIsInvalid) {
  std::string doc = kHandWritten;
  doc.replace(doc.find("[0.6, 1.8, 0.4]"), 15, "[0.6, -1.8, 0.4]");
  EXPECT_THROW(frame_from_string(doc), InvalidRecord);
}

TEST(ValidateSequence, IncreasingTimestampsClean) {
  std::vector<FrameAnnotation> seq;
  for (int i = 0; i < 5; ++i) {
    FrameAnnotation f = sample_frame(2);
    f.frame_index = i;
    f.timestamp = 0.2 * i;
    seq.push_back(f);
  }
  EXPECT_TRUE(validate_sequence(seq).ok());
}

TEST(ValidateSequence, DuplicateInstanceReported) {
  std::vector<FrameAnnotation> seq{sample_frame(2)};
  seq[0].boxes[1].instance_id = seq[0].boxes[0].instance_id;
  auto rep = validate_sequence(seq);
  ASSERT_EQ(rep.findings.size(), 1u);
  EXPECT_EQ(rep.findings[0].kind, FindingKind::DuplicateInstanceId);
}

TEST(ValidateSequence, IntrinsicsChangeReported) {
  std::vector<FrameAnnotation> seq{sample_frame(1), sample_frame(1)};
  seq[1].frame_index = 4;
  seq[1].timestamp = 0.8;
  seq[1].sensor.camera_intrinsic(0, 0) = 900;
  auto rep = validate_sequence(seq);
  ASSERT_EQ(rep.findings.size(), 1u);
  EXPECT_EQ(rep.findings[0].kind, FindingKind::IntrinsicsChanged);
}

TEST(ValidateSequence, NonMonotoneTimestampReported) {
  std::vector<FrameAnnotation> seq{sample_frame(1), sample_frame(1)};
  seq[1].frame_index = 4;
  auto rep = validate_sequence(seq);
  ASSERT_EQ(rep.findings.size(), 1u);
  EXPECT_EQ(rep.findings[0].kind, FindingKind::NonMonotoneTimestamp);
}

TEST(Manifest, RoundTrip) {
  DatasetManifest m;
  m.name = "scene";
  m.scene_id = "C";
  m.camera_side = CameraSide::Left;
  m.carrier = Carrier::Truck;
  m.move_scheme = MoveScheme::Predefined;
  m.frame_count = 12;
  m.seed = 18446744073709551615ull;
  std::stringstream ss;
  write_manifest(m, ss);
  DatasetManifest r = read_manifest(ss);
  EXPECT_EQ(r.name, m.name);
  EXPECT_EQ(r.scene_id, m.scene_id);
  EXPECT_EQ(r.camera_side, m.camera_side);
  EXPECT_EQ(r.carrier, m.carrier);
  EXPECT_EQ(r.move_scheme, m.move_scheme);
  EXPECT_EQ(r.frame_count, m.frame_count);
  EXPECT_EQ(r.seed, m.seed);
}

TEST(Manifest, UnknownEnumRejected) {
  EXPECT_THROW(parse_camera_side("top"), ConfigError);
  EXPECT_THROW(parse_carrier("crane"), ConfigError);
  EXPECT_THROW(parse_move_scheme("teleport"), ConfigError);
  EXPECT_EQ(parse_move_scheme("static"), MoveScheme::Static);
}

TEST(DatasetDir, WriteReadRoundTrip) {
  TempDir tmp;
  Dataset ds;
  ds.manifest.name = "unit";
  ds.manifest.frame_count = 3;
  for (int i = 0; i < 3; ++i) {
    FrameAnnotation f = sample_frame(i);
    f.frame_index = i;
    f.timestamp = 0.2 * i;
    ds.frames.push_back(f);
  }
  write_dataset(tmp.path(), ds);
  EXPECT_TRUE(std::filesystem::exists(tmp.path() / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(tmp.path() / "frame_000002.json"));
  Dataset back = read_dataset(tmp.path());
  ASSERT_EQ(back.frames.size(), 3u);
  for (int i = 0; i < 3; ++i) expect_equal(back.frames[i], ds.frames[i]);
  EXPECT_EQ(back.camera(1).fx(), 1000.0);
}

TEST(DatasetDir, FrameCountMismatchIsSchemaError) {
  TempDir tmp;
  Dataset ds;
  ds.manifest.frame_count = 2;
  ds.frames.push_back(sample_frame(1));
  ds.frames[0].frame_index = 0;
  ds.frames.push_back(sample_frame(1));
  ds.frames[1].frame_index = 1;
  ds.frames[1].timestamp = 0.8;
  write_dataset(tmp.path(), ds);
  std::filesystem::remove(tmp.path() / "frame_000001.json");
  EXPECT_THROW(read_dataset(tmp.path()), SchemaError);
}

TEST(DatasetDir, FileName) { EXPECT_EQ(frame_file_name(7), "frame_000007.json"); }
