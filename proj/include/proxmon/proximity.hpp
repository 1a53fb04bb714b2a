#pragma once

// Proximity classification of workers around a camera-carrying machine,
// the GT-to-prediction matching rule, the per-frame monitoring step and the
// classification metrics.
//
// Categories by planar range r = sqrt(x^2 + z^2) and heading angle theta:
//   I    r < R_exclusion
//   II   R_exclusion <= r < R_warning and theta >= 0 (approaching)
//   III  R_exclusion <= r < R_warning and theta <  0 (leaving)
//   IV   r >= R_warning

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxmon/dataset.hpp"
#include "proxmon/detection.hpp"
#include "proxmon/geometry.hpp"
#include "proxmon/metrics.hpp"

namespace proxmon::proximity {

struct ClassifierConfig {
  double r_exclusion = 4.0;
  double r_warning = 8.0;

  // R_warning defaults to twice R_exclusion.
  static ClassifierConfig with_exclusion(double r_exclusion, double warning_ratio = 2.0) {
    return {r_exclusion, r_exclusion * warning_ratio};
  }
  // Throws ConfigError unless 0 < R_exclusion < R_warning.
  void validate() const;
};

struct MatcherConfig {
  double iou_threshold = 0.25;

  void validate() const;
};

enum class ProximityCategory { Dangerous, PotentiallyDangerous, Concerned, Safe, Unknown };

inline constexpr std::array<ProximityCategory, 4> kKnownCategories = {
    ProximityCategory::Dangerous, ProximityCategory::PotentiallyDangerous,
    ProximityCategory::Concerned, ProximityCategory::Safe};

// "I", "II", "III", "IV", "Unknown".
std::string_view short_name(ProximityCategory c);
// Throws SchemaError on unknown names.
ProximityCategory parse_category(std::string_view s);
inline std::size_t index_of(ProximityCategory c) { return static_cast<std::size_t>(c); }

ProximityCategory classify(const geometry::Box3D& box, double theta, const ClassifierConfig& cfg);

// Computes theta from the box rotation. A box whose forward axis is vertical
// has no heading; inside the warning zone it is treated as approaching.
ProximityCategory classify(const geometry::Box3D& box, const ClassifierConfig& cfg);

// For each GT, the index of the assigned prediction or nullopt. Candidates
// are predictions with IoU >= threshold; pairs are taken greedily by
// descending score (ties: lower prediction index, then higher IoU, then
// lower GT index), so no prediction serves two GT boxes.
std::vector<std::optional<std::size_t>> match_predictions(std::span<const geometry::Box3D> gt,
                                                          std::span<const Detection> preds,
                                                          const MatcherConfig& cfg);

struct ProximityRecord {
  std::int64_t instance_id = 0;
  std::optional<Detection> matched;
  double r = 0.0;
  std::optional<double> theta;
  ProximityCategory category = ProximityCategory::Unknown;
};

// Ground truth paired with the prediction made for it.
struct EvalRecord {
  std::int64_t frame_index = 0;
  std::int64_t instance_id = 0;
  double gt_r = 0.0;
  ProximityCategory truth = ProximityCategory::Safe;
  ProximityCategory predicted = ProximityCategory::Unknown;
};

struct DangerEvent {
  std::int64_t instance_id = 0;
  ProximityCategory category = ProximityCategory::Dangerous;
  double r = 0.0;
};

enum class MonitorMode { Live, Eval };

struct MonitorConfig {
  ClassifierConfig classifier;
  MatcherConfig matcher;
  MonitorMode mode = MonitorMode::Live;
};

struct FrameInput {
  std::int64_t frame_index = 0;
  std::span<const dataset::BoxRecord> gt;  // used in eval mode
  std::span<const Detection> detections;
};

struct FrameReport {
  std::int64_t frame_index = 0;
  std::array<std::size_t, 5> counts{};  // indexed by ProximityCategory
  std::vector<ProximityRecord> records;
  std::vector<EvalRecord> eval_records;  // eval mode only
  std::vector<DangerEvent> events;       // one per category I or II worker
  double processing_seconds = 0.0;
};

// Live mode classifies every detection (instance_id = detection index).
// Eval mode classifies the prediction matched to each GT worker, Unknown
// when unmatched.
FrameReport monitor_frame(const FrameInput& in, const MonitorConfig& cfg);

struct EvalCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct CategoryMetrics {
  std::optional<double> precision;  // undefined when TP + FP = 0
  std::optional<double> recall;     // undefined when TP + FN = 0
  std::optional<double> f1;         // undefined when either is undefined
};

CategoryMetrics metrics_from_counts(const EvalCounts& c);

struct ClassificationReport {
  std::array<EvalCounts, 4> counts{};
  std::array<CategoryMetrics, 4> metrics{};
  // Mean over the defined per-category values.
  CategoryMetrics mean;
  // confusion[truth][predicted], predicted column 4 is Unknown.
  std::array<std::array<std::size_t, 5>, 4> confusion{};
  std::size_t workers = 0;
};

// Unknown predictions count as FN for the true category and never as FP.
ClassificationReport evaluate_classification(std::span<const EvalRecord> records,
                                             const std::optional<metrics::RangeRegime>& range = {});

// Precision/recall/F1 columns of the classification table.
std::string classification_table_csv(const ClassificationReport& report,
                                     const metrics::RangeRegime& range, double r_exclusion,
                                     std::string_view dataset_label, bool header);

// Classification records document.
std::string write_records(std::span<const EvalRecord> records, const ClassifierConfig& cls,
                          const MatcherConfig& match, std::string_view dataset_label);
struct RecordsDocument {
  std::string dataset;
  ClassifierConfig classifier;
  MatcherConfig matcher;
  std::vector<EvalRecord> records;
};
RecordsDocument read_records(std::string_view text);

}  // namespace proxmon::proximity
