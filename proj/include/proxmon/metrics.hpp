#pragma once

// 3D detection metrics: rotated-box IoU, range and difficulty filters, and
// 11-point interpolated average precision.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "proxmon/detection.hpp"
#include "proxmon/geometry.hpp"

namespace proxmon::metrics {

using geometry::Box3D;

// Rotation reduced to yaw about the vertical axis; intersection is the
// bird's-eye polygon overlap times the vertical interval overlap.
struct AnalyticYaw {};

// Point-sampling estimate over the axis-aligned bounds of both boxes.
// Handles arbitrary rotations.
struct MonteCarlo {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

using IoUMethod = std::variant<AnalyticYaw, MonteCarlo>;

inline constexpr std::size_t kMinMonteCarloSamples = 10'000;

double iou3d(const Box3D& a, const Box3D& b, const IoUMethod& method = AnalyticYaw{});

// Area of intersection of two convex polygons given as (x, z) vertex lists.
double convex_overlap_area(std::span<const Eigen::Vector2d> p, std::span<const Eigen::Vector2d> q);

// (r_min, r_max] on the planar range sqrt(x^2 + z^2).
struct RangeRegime {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();

  bool contains(double r) const { return r > r_min && r <= r_max; }
  bool contains(const Box3D& b) const { return contains(geometry::ground_range(b.center)); }
  // "(0, 10]" or "(50, inf)".
  std::string label() const;
  // Parses "lo:hi" where hi may be "inf". Throws ConfigError.
  static RangeRegime parse(std::string_view text);
};

std::vector<Box3D> range_filter(std::span<const Box3D> boxes, const RangeRegime& regime);
std::vector<Detection> range_filter(std::span<const Detection> dets, const RangeRegime& regime);

inline constexpr double kEasyMinHeightPx = 42.0;

// Keeps GT boxes whose projected height exceeds 42 px; drops boxes that
// reach behind the camera.
bool is_easy(const Box3D& gt, const geometry::CameraModel& cam);
std::vector<Box3D> easy_filter(std::span<const Box3D> gt, const geometry::CameraModel& cam);

enum class Difficulty { None, Easy };

struct APConfig {
  double iou_threshold = 0.5;
  Difficulty difficulty = Difficulty::Easy;
  RangeRegime range;

  void validate() const;
};

inline constexpr double kStrictIoU = 0.5;
inline constexpr double kLooseIoU = 0.25;

struct PRPoint {
  double score = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  double recall = 0.0;
  double precision = 0.0;
};

struct APResult {
  std::optional<double> ap;   // undefined when no GT is evaluated
  std::vector<PRPoint> curve;  // one point per ranked, counted detection
  std::size_t instances = 0;   // GT inside the range regime
  std::size_t evaluated_gt = 0;  // of those, GT that pass the difficulty filter
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
};

struct APFrame {
  std::vector<Box3D> gt;
  std::vector<Detection> detections;
  geometry::CameraModel camera;
};

// Detections ranked by score (ties by frame, then index). A detection is a
// TP when it overlaps an unclaimed evaluated GT by at least the threshold
// (claiming the highest-IoU one); one that only overlaps a GT excluded by
// the difficulty filter is ignored; anything else is an FP.
APResult ap11(std::span<const APFrame> frames, const APConfig& cfg);

// 11-point interpolation over recall levels 0, 0.1, ..., 1.0 of an already
// accumulated curve with `gt_count` positives.
double interpolate_ap11(std::span<const PRPoint> curve, std::size_t gt_count);

struct APRow {
  RangeRegime range;
  std::size_t instances = 0;
  APResult strict;
  APResult loose;

  std::optional<double> mean() const;
};

// The range regimes of the detection table.
std::vector<RangeRegime> default_ap_regimes();

std::vector<APRow> ap_report(std::span<const APFrame> frames,
                             std::span<const RangeRegime> regimes);

// "Range,Instance,3D_AP11_easy_strict,3D_AP11_easy_loose,Mean" with APs as
// percentages to 2 decimals and "undefined" for empty rows. A non-empty
// `label` adds a leading Dataset column.
std::string ap_table_csv(std::span<const APRow> rows, std::string_view label = {},
                         bool header = true);

// Rounds half away from zero to `decimals` places.
double round_to(double x, int decimals);
std::string format_fixed(double x, int decimals);

}  // namespace proxmon::metrics
