#pragma once

// Annotation records and their on-disk JSON form.
//
// A dataset directory holds `manifest.json` plus one `frame_%06d.json` per
// captured frame. Field names of the sensor and box records are part of the
// interchange contract and must not change.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "proxmon/geometry.hpp"

namespace proxmon::dataset {

struct SensorRecord {
  std::string sensor_id;
  geometry::Vec3 translation = geometry::Vec3::Zero();  // global, meters
  geometry::UnitQuaternion rotation;                    // global
  geometry::Mat3 camera_intrinsic = geometry::Mat3::Identity();

  geometry::Pose pose() const { return {translation, rotation}; }
};

// `size` is serialized as (width, height, length).
struct BoxRecord {
  int label_id = 1;
  std::string label_name = "Worker";
  std::int64_t instance_id = 0;
  geometry::Vec3 translation = geometry::Vec3::Zero();  // sensor frame, meters
  geometry::BoxSize size;
  geometry::UnitQuaternion rotation;  // sensor frame

  geometry::Box3D box() const { return {translation, size, rotation, geometry::Frame::Sensor}; }
};

struct FrameAnnotation {
  std::int64_t frame_index = 0;
  double timestamp = 0.0;  // seconds
  SensorRecord sensor;
  std::vector<BoxRecord> boxes;
};

enum class CameraSide { Front, Rear, Left, Right };
enum class Carrier { Excavator, Truck };
enum class MoveScheme { Random, Predefined, Static };

std::string_view to_string(CameraSide s);
std::string_view to_string(Carrier c);
std::string_view to_string(MoveScheme m);
// Throw ConfigError on unknown names.
CameraSide parse_camera_side(std::string_view s);
Carrier parse_carrier(std::string_view s);
MoveScheme parse_move_scheme(std::string_view s);

struct DatasetManifest {
  std::string name;
  std::string scene_id;
  CameraSide camera_side = CameraSide::Front;
  Carrier carrier = Carrier::Excavator;
  MoveScheme move_scheme = MoveScheme::Random;
  std::int64_t frame_count = 0;
  std::uint64_t seed = 0;
  int image_width = 1920;
  int image_height = 1080;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<FrameAnnotation> frames;

  // Camera for frame i: intrinsics and pose from the frame's sensor record.
  geometry::CameraModel camera(std::size_t i) const;
};

inline constexpr double kQuaternionNormTol = 1e-6;

// Throws InvalidRecord when an invariant of `f` is violated.
void check_frame(const FrameAnnotation& f);

// Serializes `f` (pretty-printed, fixed key order, shortest round-trip
// numbers). Returns the number of bytes written. Throws IoFailure or
// InvalidRecord.
std::size_t write_frame(const FrameAnnotation& f, std::ostream& sink);
std::string frame_to_string(const FrameAnnotation& f);

// Throws ParseError, SchemaError or InvalidRecord.
FrameAnnotation read_frame(std::istream& source);
FrameAnnotation frame_from_string(std::string_view text);

std::size_t write_manifest(const DatasetManifest& m, std::ostream& sink);
DatasetManifest read_manifest(std::istream& source);

enum class FindingKind { NonMonotoneTimestamp, DuplicateInstanceId, IntrinsicsChanged };

struct Finding {
  FindingKind kind;
  std::int64_t frame_index = 0;
  std::string message;
};

struct SequenceReport {
  std::vector<Finding> findings;
  bool ok() const { return findings.empty(); }
};

SequenceReport validate_sequence(const std::vector<FrameAnnotation>& frames);

std::string frame_file_name(std::int64_t frame_index);

// Writes manifest.json and the frame files into `dir`, which must exist.
void write_dataset(const std::filesystem::path& dir, const Dataset& ds);
// Reads manifest.json and every frame_*.json in lexicographic order.
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace proxmon::dataset
