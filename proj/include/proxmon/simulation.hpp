#pragma once

// Seeded kinematic scene simulator that stands in for the rendering engine:
// workers walk straight at a fixed speed, occasionally turning by a random
// angle, while a vehicle carrying up to four cameras drives a random walk,
// a closed waypoint route, or stays put. Each capture emits the sensor pose
// and the sensor-frame boxes of every visible worker.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "proxmon/dataset.hpp"
#include "proxmon/geometry.hpp"

namespace proxmon::simulation {

using geometry::Vec3;

struct WorkerAsset {
  int asset_id = 0;
  geometry::BoxSize nominal_size;
  // Per-axis (width, height, length) growth from a held or carried object.
  std::array<double, 3> carried_object_inflation{1.0, 1.0, 1.0};

  geometry::BoxSize annotated_size() const {
    return {nominal_size.width * carried_object_inflation[0],
            nominal_size.height * carried_object_inflation[1],
            nominal_size.length * carried_object_inflation[2]};
  }
};

struct AgentState {
  std::int64_t instance_id = 0;
  int asset_id = 0;
  Vec3 position = Vec3::Zero();  // global, on the ground (y = 0)
  double heading = 0.0;          // yaw of the torso forward axis, radians
  double speed = 0.0;            // m/s
};

struct CameraMount {
  dataset::CameraSide side = dataset::CameraSide::Front;
  // Camera pose in the vehicle frame (x right, y up, z forward).
  geometry::Pose pose;
};

struct VehiclePlan {
  dataset::MoveScheme scheme = dataset::MoveScheme::Random;
  dataset::Carrier carrier = dataset::Carrier::Excavator;
  // Closed route on the ground plane; only x and z are used.
  std::vector<Vec3> waypoints;
  double speed = 2.0;
  Vec3 start_position = Vec3::Zero();
  double start_heading = 0.0;
  std::vector<CameraMount> mounts;
};

// Mount at the given side of a carrier's body.
CameraMount standard_mount(dataset::Carrier carrier, dataset::CameraSide side);

// Distribution of the turn applied when a reorientation fires: uniform on
// [low, high] unless `values` is non-empty, in which case one entry is
// picked uniformly.
struct AngleDistribution {
  double low = -3.141592653589793;
  double high = 3.141592653589793;
  std::vector<double> values;

  double sample(std::mt19937_64& rng) const;
};

struct SceneBounds {
  double x_min = -100.0;
  double x_max = 100.0;
  double z_min = -100.0;
  double z_max = 100.0;

  bool contains(const Vec3& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.z() >= z_min && p.z() <= z_max;
  }
};

struct SimConfig {
  std::string name = "sim";
  std::string scene_id = "D";
  std::uint64_t seed = 0;
  SceneBounds bounds;
  int worker_count = 60;
  std::vector<WorkerAsset> assets;
  double worker_speed = 1.2;
  double reorientation_probability = 0.02;
  AngleDistribution reorientation;
  double vehicle_reorientation_probability = 0.01;
  double dt = 0.2;
  std::int64_t frame_count = 2000;
  double max_annotation_range = 120.0;
  geometry::Mat3 intrinsic = geometry::make_intrinsic(1000.0, 1000.0, 960.0, 540.0);
  int image_width = 1920;
  int image_height = 1080;
  VehiclePlan vehicle;

  // Throws ConfigError on any violated constraint.
  void validate() const;
};

struct VehicleState {
  Vec3 position = Vec3::Zero();
  double heading = 0.0;
  double route_progress = 0.0;  // arc length travelled along the route

  geometry::Pose pose() const {
    return {position, geometry::UnitQuaternion::from_yaw(heading)};
  }
};

struct SimState {
  std::int64_t step_index = 0;
  double time = 0.0;
  std::vector<AgentState> workers;
  VehicleState vehicle;
  std::mt19937_64 rng;
};

SimState init_scene(const SimConfig& cfg);

// Advances every agent and the vehicle by dt seconds (dt > 0).
void step(SimState& state, const SimConfig& cfg, double dt);

// Global camera model of the mount tagged `side`. Throws UnknownCameraTag.
geometry::CameraModel camera_for(const SimState& state, const SimConfig& cfg,
                                 dataset::CameraSide side);

// Annotation of the current state as seen by the camera tagged `side`.
dataset::FrameAnnotation capture(const SimState& state, const SimConfig& cfg,
                                 dataset::CameraSide side);

// Global-frame box of a worker (center half its height above ground).
geometry::Box3D worker_box(const AgentState& agent, const SimConfig& cfg);

// frame_count frames per mounted camera at timestamps k*dt, in mount order.
std::vector<dataset::Dataset> run(const SimConfig& cfg);

// 52 worker assets with ids 0..51; ids 0-31 train, 32-41 validation, 42-51 test.
std::vector<WorkerAsset> standard_asset_library();

// Scene configurations mirroring the sub-dataset table: "table3-train-a",
// "table3-train-b", "table3-train-e", "table3-val-c", "table3-val-f",
// "table3-front", "table3-rear", "table3-left", "table3-right",
// "table3-front-static", "table3-front-truck", "table3-test-all" (four
// cameras). Throws UnknownPreset.
SimConfig preset(std::string_view name);
std::vector<std::string> preset_names();

// JSON config document; fields absent from the document keep the values
// of `base`.
SimConfig config_from_json(std::string_view text, SimConfig base);
std::string config_to_json(const SimConfig& cfg);

}  // namespace proxmon::simulation
