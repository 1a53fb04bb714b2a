#pragma once

// Stand-in for the monocular 3D detector. `perturb` turns ground truth into
// detections through a seeded noise model; `read_detections` ingests
// predictions produced elsewhere in the same box format.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "proxmon/dataset.hpp"
#include "proxmon/detection.hpp"
#include "proxmon/geometry.hpp"

namespace proxmon::detector {

// Probability that a GT box at planar range r is detected.
struct DetectionCurve {
  enum class Kind { Constant, Logistic, Piecewise };
  Kind kind = Kind::Constant;
  double p_max = 1.0;  // Constant value, or logistic plateau
  double r_half = 40.0;  // logistic midpoint (m)
  double scale = 4.0;    // logistic width (m)
  // Piecewise-linear (range, probability) knots, ranges increasing; clamped
  // at both ends.
  std::vector<std::pair<double, double>> knots;

  double operator()(double r) const;
};

struct NoiseModel {
  // Depth error sigma_d(r) = depth_sigma_base + depth_sigma_slope * r (m),
  // applied along the viewing ray.
  double depth_sigma_base = 0.0;
  double depth_sigma_slope = 0.0;
  double lateral_sigma = 0.0;  // x and y (m)
  double size_sigma = 0.0;     // relative, per axis
  double heading_sigma = 0.0;  // yaw about the sensor vertical (rad)
  // When a flip fires, a heading with theta >= 0 is mirrored to negative
  // with probability flip_negative_bias; one with theta < 0 is mirrored to
  // positive with probability 1 - flip_negative_bias.
  double flip_probability = 0.0;
  double flip_negative_bias = 0.5;
  DetectionCurve detection;
  double false_positive_rate = 0.0;  // Poisson mean per frame
  double false_positive_max_range = 60.0;
  // score = clamp(base - slope * r + N(0, jitter), 0, 1)
  double score_base = 1.0;
  double score_slope = 0.0;
  double score_jitter = 0.0;
  double false_positive_score_base = 0.5;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
};

// Deterministic in (nm.seed, frame_index).
std::vector<Detection> perturb(std::span<const dataset::BoxRecord> gt,
                               const geometry::CameraModel& cam, const NoiseModel& nm,
                               std::int64_t frame_index);

// "perfect", "paper-trend", "stress". Throws UnknownPreset.
NoiseModel calibrate_preset(std::string_view name);
std::vector<std::string> preset_names();

// Serialized parameters, for effective-config headers.
std::string describe(const NoiseModel& nm);

// Detections document:
//   {"frames": [{"frame_index": 0, "detections": [
//       {"translation": [...], "size": [...], "rotation": [...], "score": 0.9}]}]}
// `frame_indices` and `per_frame` are parallel.
std::string write_detections(std::span<const std::int64_t> frame_indices,
                             std::span<const std::vector<Detection>> per_frame);

// Returns one list per entry of `frame_indices` (empty when the document has
// none). Blank input means no detections at all. Throws ParseError,
// SchemaError (bad fields, score outside [0, 1], duplicate frames) or
// FrameMismatch (frame_index not in `frame_indices`).
std::vector<std::vector<Detection>> read_detections(std::string_view text,
                                                    std::span<const std::int64_t> frame_indices);

// Runs `perturb` over every frame of a dataset.
std::vector<std::vector<Detection>> detect_dataset(const dataset::Dataset& ds,
                                                   const NoiseModel& nm);

std::vector<std::int64_t> frame_indices(const dataset::Dataset& ds);

}  // namespace proxmon::detector
