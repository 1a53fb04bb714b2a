#include "proxmon/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace proxmon::dataset {

using detail::Json;
namespace fs = std::filesystem;

std::string_view to_string(CameraSide s) {
  switch (s) {
    case CameraSide::Front: return "front";
    case CameraSide::Rear: return "rear";
    case CameraSide::Left: return "left";
    case CameraSide::Right: return "right";
  }
  return "front";
}

std::string_view to_string(Carrier c) {
  return c == Carrier::Excavator ? "excavator" : "truck";
}

std::string_view to_string(MoveScheme m) {
  switch (m) {
    case MoveScheme::Random: return "random";
    case MoveScheme::Predefined: return "predefined";
    case MoveScheme::Static: return "static";
  }
  return "random";
}

CameraSide parse_camera_side(std::string_view s) {
  for (auto v : {CameraSide::Front, CameraSide::Rear, CameraSide::Left, CameraSide::Right}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown camera side \"" + std::string(s) + "\"");
}

Carrier parse_carrier(std::string_view s) {
  for (auto v : {Carrier::Excavator, Carrier::Truck}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown carrier \"" + std::string(s) + "\"");
}

MoveScheme parse_move_scheme(std::string_view s) {
  for (auto v : {MoveScheme::Random, MoveScheme::Predefined, MoveScheme::Static}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown move scheme \"" + std::string(s) + "\"");
}

geometry::CameraModel Dataset::camera(std::size_t i) const {
  const SensorRecord& s = frames.at(i).sensor;
  return {s.camera_intrinsic, manifest.image_width, manifest.image_height, s.pose()};
}

namespace {

bool finite(const geometry::Vec3& v) { return v.allFinite(); }

Json sensor_to_json(const SensorRecord& s) {
  Json k = Json::array();
  for (int r = 0; r < 3; ++r) {
    k.push_back(Json::array({s.camera_intrinsic(r, 0), s.camera_intrinsic(r, 1),
                             s.camera_intrinsic(r, 2)}));
  }
  Json j = Json::object();
  j["sensor_id"] = s.sensor_id;
  j["translation"] = detail::vec3_to_json(s.translation);
  j["rotation"] = detail::quat_to_json(s.rotation);
  j["camera_intrinsic"] = std::move(k);
  return j;
}

SensorRecord sensor_from_json(const Json& j) {
  constexpr std::string_view kWhere = "sensor";
  SensorRecord s;
  s.sensor_id = detail::require_string(j, "sensor_id", kWhere);
  s.translation = detail::vec3_from_json(detail::require(j, "translation", kWhere),
                                         "sensor.translation");
  s.rotation = detail::quat_from_json(detail::require(j, "rotation", kWhere), "sensor.rotation",
                                      kQuaternionNormTol);
  const Json& k = detail::require(j, "camera_intrinsic", kWhere);
  if (!k.is_array() || k.size() != 3) {
    throw SchemaError("sensor.camera_intrinsic: expected a 3x3 matrix");
  }
  for (int r = 0; r < 3; ++r) {
    double row[3];
    detail::require_numbers(k[r], 3, row, "sensor.camera_intrinsic");
    for (int c = 0; c < 3; ++c) s.camera_intrinsic(r, c) = row[c];
  }
  return s;
}

Json box_to_json(const BoxRecord& b) {
  Json j = Json::object();
  j["label_id"] = b.label_id;
  j["label_name"] = b.label_name;
  j["instance_id"] = b.instance_id;
  j["translation"] = detail::vec3_to_json(b.translation);
  j["size"] = detail::size_to_json(b.size);
  j["rotation"] = detail::quat_to_json(b.rotation);
  return j;
}

BoxRecord box_from_json(const Json& j) {
  constexpr std::string_view kWhere = "annotation";
  BoxRecord b;
  b.label_id = static_cast<int>(detail::require_integer(j, "label_id", kWhere));
  b.label_name = detail::require_string(j, "label_name", kWhere);
  b.instance_id = detail::require_integer(j, "instance_id", kWhere);
  b.translation =
      detail::vec3_from_json(detail::require(j, "translation", kWhere), "annotation.translation");
  b.size = detail::size_from_json(detail::require(j, "size", kWhere), "annotation.size");
  b.rotation = detail::quat_from_json(detail::require(j, "rotation", kWhere),
                                      "annotation.rotation", kQuaternionNormTol);
  if (b.instance_id < 0) {
    throw InvalidRecord("annotation.instance_id must be non-negative");
  }
  return b;
}

std::size_t emit(const std::string& text, std::ostream& sink) {
  sink.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!sink) throw IoFailure("write failed");
  return text.size();
}

std::string slurp(std::istream& source) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw IoFailure("read failed");
  return text;
}

}  // namespace

void check_frame(const FrameAnnotation& f) {
  if (!std::isfinite(f.timestamp)) throw InvalidRecord("timestamp must be finite");
  if (!finite(f.sensor.translation) || !f.sensor.camera_intrinsic.allFinite()) {
    throw InvalidRecord("sensor record has non-finite values");
  }
  std::set<std::int64_t> seen;
  for (const BoxRecord& b : f.boxes) {
    if (!b.size.valid()) throw InvalidRecord("box size components must be positive");
    if (b.instance_id < 0) throw InvalidRecord("instance_id must be non-negative");
    if (!finite(b.translation)) throw InvalidRecord("box translation is not finite");
    if (!seen.insert(b.instance_id).second) {
      throw InvalidRecord("duplicate instance_id " + std::to_string(b.instance_id) +
                          " in frame " + std::to_string(f.frame_index));
    }
  }
}

std::string frame_to_string(const FrameAnnotation& f) {
  check_frame(f);
  Json j = Json::object();
  j["frame_index"] = f.frame_index;
  j["timestamp"] = f.timestamp;
  j["sensor"] = sensor_to_json(f.sensor);
  Json boxes = Json::array();
  for (const BoxRecord& b : f.boxes) boxes.push_back(box_to_json(b));
  j["annotations"] = std::move(boxes);
  return detail::dump(j);
}

std::size_t write_frame(const FrameAnnotation& f, std::ostream& sink) {
  return emit(frame_to_string(f), sink);
}

FrameAnnotation frame_from_string(std::string_view text) {
  const Json j = detail::parse_json(text, "frame");
  constexpr std::string_view kWhere = "frame";
  FrameAnnotation f;
  f.frame_index = detail::require_integer(j, "frame_index", kWhere);
  f.timestamp = detail::require_number(j, "timestamp", kWhere);
  f.sensor = sensor_from_json(detail::require(j, "sensor", kWhere));
  const Json& boxes = detail::require(j, "annotations", kWhere);
  if (!boxes.is_array()) throw SchemaError("frame.annotations must be an array");
  f.boxes.reserve(boxes.size());
  for (const Json& b : boxes) f.boxes.push_back(box_from_json(b));
  check_frame(f);
  return f;
}

FrameAnnotation read_frame(std::istream& source) { return frame_from_string(slurp(source)); }

std::size_t write_manifest(const DatasetManifest& m, std::ostream& sink) {
  if (m.frame_count < 0) throw InvalidRecord("frame_count must be non-negative");
  Json j = Json::object();
  j["name"] = m.name;
  j["scene_id"] = m.scene_id;
  j["camera_side"] = to_string(m.camera_side);
  j["carrier"] = to_string(m.carrier);
  j["move_scheme"] = to_string(m.move_scheme);
  j["frame_count"] = m.frame_count;
  j["seed"] = m.seed;
  j["image_width"] = m.image_width;
  j["image_height"] = m.image_height;
  return emit(detail::dump(j), sink);
}

DatasetManifest read_manifest(std::istream& source) {
  const Json j = detail::parse_json(slurp(source), "manifest");
  constexpr std::string_view kWhere = "manifest";
  DatasetManifest m;
  m.name = detail::require_string(j, "name", kWhere);
  m.scene_id = detail::require_string(j, "scene_id", kWhere);
  try {
    m.camera_side = parse_camera_side(detail::require_string(j, "camera_side", kWhere));
    m.carrier = parse_carrier(detail::require_string(j, "carrier", kWhere));
    m.move_scheme = parse_move_scheme(detail::require_string(j, "move_scheme", kWhere));
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("manifest: ") + e.what());
  }
  m.frame_count = detail::require_integer(j, "frame_count", kWhere);
  const Json& seed = detail::require(j, "seed", kWhere);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw SchemaError("manifest: seed must be a non-negative integer");
  }
  m.seed = seed.get<std::uint64_t>();
  m.image_width = static_cast<int>(detail::require_integer(j, "image_width", kWhere));
  m.image_height = static_cast<int>(detail::require_integer(j, "image_height", kWhere));
  if (m.frame_count < 0) throw InvalidRecord("manifest: frame_count must be non-negative");
  if (m.image_width <= 0 || m.image_height <= 0) {
    throw InvalidRecord("manifest: image size must be positive");
  }
  return m;
}

SequenceReport validate_sequence(const std::vector<FrameAnnotation>& frames) {
  SequenceReport report;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameAnnotation& f = frames[i];
    if (i > 0 && !(f.timestamp > frames[i - 1].timestamp)) {
      std::ostringstream oss;
      oss << "timestamp " << f.timestamp << " does not increase over " << frames[i - 1].timestamp;
      report.findings.push_back({FindingKind::NonMonotoneTimestamp, f.frame_index, oss.str()});
    }
    std::set<std::int64_t> seen;
    for (const BoxRecord& b : f.boxes) {
      if (!seen.insert(b.instance_id).second) {
        report.findings.push_back({FindingKind::DuplicateInstanceId, f.frame_index,
                                   "duplicate instance_id " + std::to_string(b.instance_id)});
      }
    }
    if (i > 0 && f.sensor.camera_intrinsic != frames[0].sensor.camera_intrinsic) {
      report.findings.push_back(
          {FindingKind::IntrinsicsChanged, f.frame_index, "camera intrinsics differ from frame 0"});
    }
  }
  return report;
}

std::string frame_file_name(std::int64_t frame_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06lld.json", static_cast<long long>(frame_index));
  return buf;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  emit(text, out);
}

}  // namespace

void write_dataset(const fs::path& dir, const Dataset& ds) {
  if (!fs::is_directory(dir)) throw IoFailure("output directory " + dir.string() + " missing");
  std::ostringstream manifest;
  write_manifest(ds.manifest, manifest);
  write_file(dir / "manifest.json", manifest.str());
  for (const FrameAnnotation& f : ds.frames) {
    write_file(dir / frame_file_name(f.frame_index), frame_to_string(f));
  }
}

Dataset read_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + manifest_path.string());
  Dataset ds;
  ds.manifest = read_manifest(in);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("frame_") && name.ends_with(".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  ds.frames.reserve(files.size());
  for (const fs::path& p : files) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw IoFailure("cannot open " + p.string());
    ds.frames.push_back(read_frame(f));
  }
  if (static_cast<std::int64_t>(ds.frames.size()) != ds.manifest.frame_count) {
    throw SchemaError("manifest lists " + std::to_string(ds.manifest.frame_count) +
                      " frames but " + std::to_string(ds.frames.size()) + " frame files exist");
  }
  return ds;
}

}  // namespace proxmon::dataset
