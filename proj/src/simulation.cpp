#include "proxmon/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "json_util.hpp"
#include "proxmon/errors.hpp"

namespace proxmon::simulation {

using dataset::CameraSide;
using dataset::Carrier;
using dataset::MoveScheme;
using detail::Json;
using geometry::Pose;
using geometry::UnitQuaternion;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Timestamps live on a nanosecond grid so that k * 0.2 prints as 0.6, not
// 0.6000000000000001.
double snap_time(double t) { return std::round(t * 1e9) / 1e9; }

struct CarrierBody {
  double length;
  double width;
  double camera_height;
};

CarrierBody body_of(Carrier c) {
  return c == Carrier::Excavator ? CarrierBody{6.0, 3.0, 2.5} : CarrierBody{8.0, 2.5, 3.0};
}

void advance_with_reflection(Vec3& pos, double& heading, double distance,
                             const SceneBounds& b) {
  double x = pos.x() + distance * std::sin(heading);
  double z = pos.z() + distance * std::cos(heading);
  // Loop covers steps longer than the scene.
  for (int guard = 0; guard < 64 && (x < b.x_min || x > b.x_max); ++guard) {
    x = x > b.x_max ? 2 * b.x_max - x : 2 * b.x_min - x;
    heading = -heading;
  }
  for (int guard = 0; guard < 64 && (z < b.z_min || z > b.z_max); ++guard) {
    z = z > b.z_max ? 2 * b.z_max - z : 2 * b.z_min - z;
    heading = kPi - heading;
  }
  x = std::clamp(x, b.x_min, b.x_max);
  z = std::clamp(z, b.z_min, b.z_max);
  pos = Vec3(x, pos.y(), z);
  heading = geometry::wrap_angle(heading);
}

double route_length(const std::vector<Vec3>& w) {
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec3& a = w[i];
    const Vec3& b = w[(i + 1) % w.size()];
    total += std::hypot(b.x() - a.x(), b.z() - a.z());
  }
  return total;
}

// Position and heading at arc length s along the closed route.
void route_point(const std::vector<Vec3>& w, double s, Vec3& pos, double& heading) {
  const double total = route_length(w);
  s = std::fmod(s, total);
  if (s < 0) s += total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec3& a = w[i];
    const Vec3& b = w[(i + 1) % w.size()];
    const double dx = b.x() - a.x();
    const double dz = b.z() - a.z();
    const double seg = std::hypot(dx, dz);
    if (seg == 0.0) continue;
    if (s <= seg || i + 1 == w.size()) {
      const double t = std::min(s / seg, 1.0);
      pos = Vec3(a.x() + t * dx, 0.0, a.z() + t * dz);
      heading = std::atan2(dx, dz);
      return;
    }
    s -= seg;
  }
}

const CameraMount& find_mount(const SimConfig& cfg, CameraSide side) {
  for (const CameraMount& m : cfg.vehicle.mounts) {
    if (m.side == side) return m;
  }
  throw UnknownCameraTag("no camera mounted on the " + std::string(dataset::to_string(side)) +
                         " side");
}

const WorkerAsset& find_asset(const SimConfig& cfg, int asset_id) {
  for (const WorkerAsset& a : cfg.assets) {
    if (a.asset_id == asset_id) return a;
  }
  throw InvariantViolation("worker references unknown asset " + std::to_string(asset_id));
}

}  // namespace

CameraMount standard_mount(Carrier carrier, CameraSide side) {
  const CarrierBody body = body_of(carrier);
  const double h = body.camera_height;
  switch (side) {
    case CameraSide::Front:
      return {side, {Vec3(0.0, h, body.length / 2), UnitQuaternion::from_yaw(0.0)}};
    case CameraSide::Rear:
      return {side, {Vec3(0.0, h, -body.length / 2), UnitQuaternion::from_yaw(kPi)}};
    case CameraSide::Left:
      return {side, {Vec3(-body.width / 2, h, 0.0), UnitQuaternion::from_yaw(-kPi / 2)}};
    case CameraSide::Right:
      return {side, {Vec3(body.width / 2, h, 0.0), UnitQuaternion::from_yaw(kPi / 2)}};
  }
  return {};
}

double AngleDistribution::sample(std::mt19937_64& rng) const {
  if (!values.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    return values[pick(rng)];
  }
  if (low == high) return low;
  return uniform(rng, low, high);
}

void SimConfig::validate() const {
  auto fail = [&](const std::string& msg) { throw ConfigError("sim config: " + msg); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (frame_count < 1) fail("frame_count must be at least 1");
  if (worker_count < 0) fail("worker_count must be non-negative");
  if (assets.empty()) fail("asset library is empty");
  if (!(bounds.x_max > bounds.x_min) || !(bounds.z_max > bounds.z_min)) {
    fail("scene bounds have zero area");
  }
  for (double p : {reorientation_probability, vehicle_reorientation_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (!(worker_speed >= 0.0) || !(vehicle.speed >= 0.0)) fail("speeds must be non-negative");
  if (!(max_annotation_range > 0.0)) fail("max_annotation_range must be positive");
  if (reorientation.values.empty() && !(reorientation.low <= reorientation.high)) {
    fail("reorientation range is empty");
  }
  std::set<int> ids;
  for (const WorkerAsset& a : assets) {
    const auto& s = a.nominal_size;
    if (s.width < 0.3 || s.width > 1.5 || s.length < 0.3 || s.length > 1.5) {
      fail("asset " + std::to_string(a.asset_id) + ": width/length outside 0.3-1.5 m");
    }
    if (s.height < 1.4 || s.height > 2.1) {
      fail("asset " + std::to_string(a.asset_id) + ": height outside 1.4-2.1 m");
    }
    for (double f : a.carried_object_inflation) {
      if (!(f >= 1.0)) fail("asset " + std::to_string(a.asset_id) + ": inflation below 1");
    }
    if (!ids.insert(a.asset_id).second) fail("duplicate asset id " + std::to_string(a.asset_id));
  }
  geometry::CameraModel cam{intrinsic, image_width, image_height, {}};
  cam.validate();
  if (vehicle.mounts.empty() || vehicle.mounts.size() > 4) fail("need 1 to 4 camera mounts");
  std::set<CameraSide> sides;
  for (const CameraMount& m : vehicle.mounts) {
    if (!sides.insert(m.side).second) fail("camera mounts must have distinct tags");
  }
  if (vehicle.scheme == MoveScheme::Predefined) {
    if (vehicle.waypoints.size() < 2) fail("waypoint route needs at least 2 waypoints");
    for (const Vec3& w : vehicle.waypoints) {
      if (!bounds.contains(w)) fail("waypoint outside scene bounds");
    }
    if (!(route_length(vehicle.waypoints) > 0.0)) fail("waypoint route has zero length");
  } else if (!bounds.contains(vehicle.start_position)) {
    fail("vehicle start position outside scene bounds");
  }
}

SimState init_scene(const SimConfig& cfg) {
  cfg.validate();
  SimState state;
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                    static_cast<std::uint32_t>(cfg.seed >> 32)};
  state.rng.seed(seq);

  std::uniform_int_distribution<std::size_t> pick(0, cfg.assets.size() - 1);
  state.workers.reserve(static_cast<std::size_t>(cfg.worker_count));
  for (int i = 0; i < cfg.worker_count; ++i) {
    AgentState a;
    a.instance_id = i;
    a.asset_id = cfg.assets[pick(state.rng)].asset_id;
    const double x = uniform(state.rng, cfg.bounds.x_min, cfg.bounds.x_max);
    const double z = uniform(state.rng, cfg.bounds.z_min, cfg.bounds.z_max);
    a.position = Vec3(x, 0.0, z);
    a.heading = geometry::wrap_angle(uniform(state.rng, -kPi, kPi));
    a.speed = cfg.worker_speed;
    state.workers.push_back(a);
  }

  if (cfg.vehicle.scheme == MoveScheme::Predefined) {
    route_point(cfg.vehicle.waypoints, 0.0, state.vehicle.position, state.vehicle.heading);
  } else {
    state.vehicle.position = Vec3(cfg.vehicle.start_position.x(), 0.0,
                                  cfg.vehicle.start_position.z());
    state.vehicle.heading = geometry::wrap_angle(cfg.vehicle.start_heading);
  }
  return state;
}

void step(SimState& state, const SimConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (AgentState& a : state.workers) {
    advance_with_reflection(a.position, a.heading, a.speed * dt, cfg.bounds);
    const double u = u01(state.rng);
    if (u < cfg.reorientation_probability) {
      a.heading = geometry::wrap_angle(a.heading + cfg.reorientation.sample(state.rng));
    }
  }

  VehicleState& v = state.vehicle;
  switch (cfg.vehicle.scheme) {
    case MoveScheme::Static:
      break;
    case MoveScheme::Predefined:
      v.route_progress += cfg.vehicle.speed * dt;
      route_point(cfg.vehicle.waypoints, v.route_progress, v.position, v.heading);
      break;
    case MoveScheme::Random: {
      advance_with_reflection(v.position, v.heading, cfg.vehicle.speed * dt, cfg.bounds);
      const double u = u01(state.rng);
      if (u < cfg.vehicle_reorientation_probability) {
        v.heading = geometry::wrap_angle(v.heading + cfg.reorientation.sample(state.rng));
      }
      break;
    }
  }
  ++state.step_index;
  state.time = snap_time(state.time + dt);
}

geometry::CameraModel camera_for(const SimState& state, const SimConfig& cfg, CameraSide side) {
  const CameraMount& mount = find_mount(cfg, side);
  return {cfg.intrinsic, cfg.image_width, cfg.image_height,
          geometry::compose(state.vehicle.pose(), mount.pose)};
}

geometry::Box3D worker_box(const AgentState& agent, const SimConfig& cfg) {
  const geometry::BoxSize size = find_asset(cfg, agent.asset_id).annotated_size();
  return {agent.position + Vec3(0.0, size.height / 2, 0.0), size,
          UnitQuaternion::from_yaw(agent.heading), geometry::Frame::Global};
}

dataset::FrameAnnotation capture(const SimState& state, const SimConfig& cfg, CameraSide side) {
  const geometry::CameraModel cam = camera_for(state, cfg, side);
  dataset::FrameAnnotation f;
  f.frame_index = state.step_index;
  f.timestamp = state.time;
  f.sensor.sensor_id = "camera_" + std::string(dataset::to_string(side));
  f.sensor.translation = cam.extrinsic.translation;
  f.sensor.rotation = cam.extrinsic.rotation;
  f.sensor.camera_intrinsic = cam.intrinsic;

  for (const AgentState& a : state.workers) {
    const geometry::Box3D sensor_box = geometry::to_sensor_frame(worker_box(a, cfg), cam);
    const auto px = geometry::project_point(sensor_box.center, cam);
    if (!px) continue;
    if (px->u < 0.0 || px->u >= cam.image_width || px->v < 0.0 || px->v >= cam.image_height) {
      continue;
    }
    if (geometry::ground_range(sensor_box.center) > cfg.max_annotation_range) continue;
    dataset::BoxRecord b;
    b.instance_id = a.instance_id;
    b.translation = sensor_box.center;
    b.size = sensor_box.size;
    b.rotation = sensor_box.rotation;
    f.boxes.push_back(std::move(b));
  }
  return f;
}

std::vector<dataset::Dataset> run(const SimConfig& cfg) {
  SimState state = init_scene(cfg);
  std::vector<dataset::Dataset> out;
  for (const CameraMount& m : cfg.vehicle.mounts) {
    dataset::Dataset ds;
    ds.manifest.name = cfg.name + "_" + std::string(dataset::to_string(m.side));
    ds.manifest.scene_id = cfg.scene_id;
    ds.manifest.camera_side = m.side;
    ds.manifest.carrier = cfg.vehicle.carrier;
    ds.manifest.move_scheme = cfg.vehicle.scheme;
    ds.manifest.frame_count = cfg.frame_count;
    ds.manifest.seed = cfg.seed;
    ds.manifest.image_width = cfg.image_width;
    ds.manifest.image_height = cfg.image_height;
    ds.frames.reserve(static_cast<std::size_t>(cfg.frame_count));
    out.push_back(std::move(ds));
  }
  for (std::int64_t k = 0; k < cfg.frame_count; ++k) {
    if (k > 0) step(state, cfg, cfg.dt);
    for (std::size_t i = 0; i < cfg.vehicle.mounts.size(); ++i) {
      out[i].frames.push_back(capture(state, cfg, cfg.vehicle.mounts[i].side));
    }
  }
  return out;
}

std::vector<WorkerAsset> standard_asset_library() {
  std::mt19937_64 rng(52);
  std::vector<WorkerAsset> lib;
  for (int id = 0; id < 52; ++id) {
    WorkerAsset a;
    a.asset_id = id;
    a.nominal_size = {uniform(rng, 0.45, 0.75), uniform(rng, 1.55, 1.9), uniform(rng, 0.3, 0.5)};
    // Every fourth asset holds or carries something.
    if (id % 4 == 3) {
      a.carried_object_inflation = {uniform(rng, 1.1, 1.6), uniform(rng, 1.0, 1.1),
                                    uniform(rng, 1.1, 1.8)};
    }
    lib.push_back(a);
  }
  return lib;
}

namespace {

struct SceneSpec {
  const char* id;
  SceneBounds bounds;
  int workers;
};

constexpr SceneSpec kScenes[] = {
    {"A", {-100, 100, -100, 100}, 50}, {"B", {-120, 120, -120, 120}, 60},
    {"C", {-90, 90, -110, 110}, 45},   {"D", {-120, 120, -120, 120}, 60},
    {"E", {-110, 110, -100, 100}, 55}, {"F", {-100, 100, -120, 120}, 50},
};

SimConfig scene_config(std::string_view scene, MoveScheme scheme, Carrier carrier,
                       std::vector<CameraSide> sides, int asset_begin, int asset_end) {
  const SceneSpec* spec = nullptr;
  for (const SceneSpec& s : kScenes) {
    if (scene == s.id) spec = &s;
  }
  SimConfig cfg;
  cfg.scene_id = spec->id;
  cfg.bounds = spec->bounds;
  cfg.worker_count = spec->workers;
  const auto lib = standard_asset_library();
  cfg.assets.assign(lib.begin() + asset_begin, lib.begin() + asset_end);
  cfg.vehicle.scheme = scheme;
  cfg.vehicle.carrier = carrier;
  for (CameraSide s : sides) cfg.vehicle.mounts.push_back(standard_mount(carrier, s));
  // Rectangular loop inset from the scene edge.
  const double ix = 0.35 * (spec->bounds.x_max - spec->bounds.x_min);
  const double iz = 0.35 * (spec->bounds.z_max - spec->bounds.z_min);
  const double mx = 0.5 * (spec->bounds.x_max + spec->bounds.x_min);
  const double mz = 0.5 * (spec->bounds.z_max + spec->bounds.z_min);
  if (scheme == MoveScheme::Predefined) {
    cfg.vehicle.waypoints = {Vec3(mx - ix, 0, mz - iz), Vec3(mx - ix, 0, mz + iz),
                             Vec3(mx + ix, 0, mz + iz), Vec3(mx + ix, 0, mz - iz)};
  }
  cfg.vehicle.start_position = Vec3(mx, 0, mz);
  return cfg;
}

struct PresetSpec {
  const char* name;
  const char* scene;
  MoveScheme scheme;
  Carrier carrier;
  std::vector<CameraSide> sides;
  int asset_begin;
  int asset_end;
};

const std::vector<PresetSpec>& preset_table() {
  using CS = CameraSide;
  static const std::vector<PresetSpec> table = {
      {"table3-train-b", "B", MoveScheme::Random, Carrier::Excavator, {CS::Front}, 0, 32},
      {"table3-train-a", "A", MoveScheme::Predefined, Carrier::Excavator, {CS::Front}, 0, 32},
      {"table3-train-e", "E", MoveScheme::Predefined, Carrier::Excavator, {CS::Front}, 0, 32},
      {"table3-val-c", "C", MoveScheme::Random, Carrier::Excavator, {CS::Front}, 32, 42},
      {"table3-val-f", "F", MoveScheme::Predefined, Carrier::Excavator, {CS::Front}, 32, 42},
      {"table3-front", "D", MoveScheme::Predefined, Carrier::Excavator, {CS::Front}, 42, 52},
      {"table3-rear", "D", MoveScheme::Predefined, Carrier::Excavator, {CS::Rear}, 42, 52},
      {"table3-left", "D", MoveScheme::Predefined, Carrier::Excavator, {CS::Left}, 42, 52},
      {"table3-right", "D", MoveScheme::Predefined, Carrier::Excavator, {CS::Right}, 42, 52},
      {"table3-front-static", "D", MoveScheme::Static, Carrier::Excavator, {CS::Front}, 42, 52},
      {"table3-front-truck", "D", MoveScheme::Predefined, Carrier::Truck, {CS::Front}, 42, 52},
      {"table3-test-all",
       "D",
       MoveScheme::Predefined,
       Carrier::Excavator,
       {CS::Front, CS::Rear, CS::Left, CS::Right},
       42,
       52},
  };
  return table;
}

}  // namespace

SimConfig preset(std::string_view name) {
  for (const PresetSpec& p : preset_table()) {
    if (name == p.name) {
      SimConfig cfg =
          scene_config(p.scene, p.scheme, p.carrier, p.sides, p.asset_begin, p.asset_end);
      cfg.name = p.name;
      return cfg;
    }
  }
  throw UnknownPreset("unknown scene preset \"" + std::string(name) + "\"");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const PresetSpec& p : preset_table()) out.emplace_back(p.name);
  return out;
}

// ---------------------------------------------------------------------------
// Config documents

namespace {

template <typename T>
void maybe(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sim config field \"") + key + "\": " + e.what());
  }
}

std::vector<double> numbers(const Json& v, std::size_t n, const char* what) {
  std::vector<double> out(n);
  try {
    detail::require_numbers(v, n, out.data(), what);
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  }
  return out;
}

}  // namespace

SimConfig config_from_json(std::string_view text, SimConfig cfg) {
  Json j;
  try {
    j = detail::parse_json(text, "sim config");
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  if (!j.is_object()) throw ConfigError("sim config must be a JSON object");
  try {
    maybe(j, "name", cfg.name);
    maybe(j, "scene_id", cfg.scene_id);
    maybe(j, "seed", cfg.seed);
    if (auto it = j.find("bounds"); it != j.end()) {
      maybe(*it, "x_min", cfg.bounds.x_min);
      maybe(*it, "x_max", cfg.bounds.x_max);
      maybe(*it, "z_min", cfg.bounds.z_min);
      maybe(*it, "z_max", cfg.bounds.z_max);
    }
    maybe(j, "worker_count", cfg.worker_count);
    if (auto it = j.find("assets"); it != j.end()) {
      if (!it->is_array()) throw ConfigError("sim config: assets must be an array");
      cfg.assets.clear();
      for (const Json& a : *it) {
        WorkerAsset asset;
        maybe(a, "asset_id", asset.asset_id);
        if (auto s = a.find("nominal_size"); s != a.end()) {
          const auto v = numbers(*s, 3, "asset nominal_size");
          asset.nominal_size = {v[0], v[1], v[2]};
        }
        if (auto s = a.find("carried_object_inflation"); s != a.end()) {
          const auto v = numbers(*s, 3, "asset carried_object_inflation");
          asset.carried_object_inflation = {v[0], v[1], v[2]};
        }
        cfg.assets.push_back(asset);
      }
    }
    maybe(j, "worker_speed", cfg.worker_speed);
    maybe(j, "reorientation_probability", cfg.reorientation_probability);
    if (auto it = j.find("reorientation"); it != j.end()) {
      maybe(*it, "low", cfg.reorientation.low);
      maybe(*it, "high", cfg.reorientation.high);
      maybe(*it, "values", cfg.reorientation.values);
    }
    maybe(j, "vehicle_reorientation_probability", cfg.vehicle_reorientation_probability);
    maybe(j, "dt", cfg.dt);
    maybe(j, "frame_count", cfg.frame_count);
    maybe(j, "max_annotation_range", cfg.max_annotation_range);
    if (auto it = j.find("camera_intrinsic"); it != j.end()) {
      if (!it->is_array() || it->size() != 3) {
        throw ConfigError("sim config: camera_intrinsic must be 3x3");
      }
      for (int r = 0; r < 3; ++r) {
        const auto row = numbers((*it)[r], 3, "camera_intrinsic");
        for (int c = 0; c < 3; ++c) cfg.intrinsic(r, c) = row[c];
      }
    }
    maybe(j, "image_width", cfg.image_width);
    maybe(j, "image_height", cfg.image_height);
    if (auto it = j.find("vehicle"); it != j.end()) {
      const Json& v = *it;
      if (auto s = v.find("scheme"); s != v.end()) {
        cfg.vehicle.scheme = dataset::parse_move_scheme(s->get<std::string>());
      }
      if (auto s = v.find("carrier"); s != v.end()) {
        cfg.vehicle.carrier = dataset::parse_carrier(s->get<std::string>());
        for (CameraMount& m : cfg.vehicle.mounts) m = standard_mount(cfg.vehicle.carrier, m.side);
      }
      if (auto s = v.find("waypoints"); s != v.end()) {
        cfg.vehicle.waypoints.clear();
        for (const Json& w : *s) {
          const auto p = numbers(w, 2, "vehicle waypoint");
          cfg.vehicle.waypoints.emplace_back(p[0], 0.0, p[1]);
        }
      }
      maybe(v, "speed", cfg.vehicle.speed);
      if (auto s = v.find("start_position"); s != v.end()) {
        const auto p = numbers(*s, 2, "vehicle start_position");
        cfg.vehicle.start_position = Vec3(p[0], 0.0, p[1]);
      }
      maybe(v, "start_heading", cfg.vehicle.start_heading);
      if (auto s = v.find("mounts"); s != v.end()) {
        cfg.vehicle.mounts.clear();
        for (const Json& m : *s) {
          if (!m.is_string()) throw ConfigError("sim config: mounts must be side names");
          cfg.vehicle.mounts.push_back(
              standard_mount(cfg.vehicle.carrier, dataset::parse_camera_side(m.get<std::string>())));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sim config: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const SimConfig& cfg) {
  Json j = Json::object();
  j["name"] = cfg.name;
  j["scene_id"] = cfg.scene_id;
  j["seed"] = cfg.seed;
  j["bounds"] = {{"x_min", cfg.bounds.x_min},
                 {"x_max", cfg.bounds.x_max},
                 {"z_min", cfg.bounds.z_min},
                 {"z_max", cfg.bounds.z_max}};
  j["worker_count"] = cfg.worker_count;
  Json assets = Json::array();
  for (const WorkerAsset& a : cfg.assets) {
    Json ja = Json::object();
    ja["asset_id"] = a.asset_id;
    ja["nominal_size"] = detail::size_to_json(a.nominal_size);
    ja["carried_object_inflation"] = a.carried_object_inflation;
    assets.push_back(std::move(ja));
  }
  j["assets"] = std::move(assets);
  j["worker_speed"] = cfg.worker_speed;
  j["reorientation_probability"] = cfg.reorientation_probability;
  j["reorientation"] = {{"low", cfg.reorientation.low},
                        {"high", cfg.reorientation.high},
                        {"values", cfg.reorientation.values}};
  j["vehicle_reorientation_probability"] = cfg.vehicle_reorientation_probability;
  j["dt"] = cfg.dt;
  j["frame_count"] = cfg.frame_count;
  j["max_annotation_range"] = cfg.max_annotation_range;
  Json k = Json::array();
  for (int r = 0; r < 3; ++r) {
    k.push_back(Json::array({cfg.intrinsic(r, 0), cfg.intrinsic(r, 1), cfg.intrinsic(r, 2)}));
  }
  j["camera_intrinsic"] = std::move(k);
  j["image_width"] = cfg.image_width;
  j["image_height"] = cfg.image_height;
  Json v = Json::object();
  v["scheme"] = dataset::to_string(cfg.vehicle.scheme);
  v["carrier"] = dataset::to_string(cfg.vehicle.carrier);
  Json w = Json::array();
  for (const Vec3& p : cfg.vehicle.waypoints) w.push_back(Json::array({p.x(), p.z()}));
  v["waypoints"] = std::move(w);
  v["speed"] = cfg.vehicle.speed;
  v["start_position"] = Json::array({cfg.vehicle.start_position.x(), cfg.vehicle.start_position.z()});
  v["start_heading"] = cfg.vehicle.start_heading;
  Json mounts = Json::array();
  for (const CameraMount& m : cfg.vehicle.mounts) mounts.push_back(dataset::to_string(m.side));
  v["mounts"] = std::move(mounts);
  j["vehicle"] = std::move(v);
  return detail::dump(j);
}

}  // namespace proxmon::simulation
