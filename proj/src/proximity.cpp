#include "proxmon/proximity.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "json_util.hpp"

namespace proxmon::proximity {

using detail::Json;

void ClassifierConfig::validate() const {
  if (!(r_exclusion > 0.0)) throw ConfigError("R_exclusion must be positive");
  if (!(r_warning > r_exclusion)) {
    std::ostringstream oss;
    oss << "R_warning (" << r_warning << ") must exceed R_exclusion (" << r_exclusion << ")";
    throw ConfigError(oss.str());
  }
}

void MatcherConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("matching IoU threshold must lie in (0, 1]");
  }
}

std::string_view short_name(ProximityCategory c) {
  switch (c) {
    case ProximityCategory::Dangerous: return "I";
    case ProximityCategory::PotentiallyDangerous: return "II";
    case ProximityCategory::Concerned: return "III";
    case ProximityCategory::Safe: return "IV";
    case ProximityCategory::Unknown: return "Unknown";
  }
  return "Unknown";
}

ProximityCategory parse_category(std::string_view s) {
  for (auto c : {ProximityCategory::Dangerous, ProximityCategory::PotentiallyDangerous,
                 ProximityCategory::Concerned, ProximityCategory::Safe,
                 ProximityCategory::Unknown}) {
    if (short_name(c) == s) return c;
  }
  throw SchemaError("unknown proximity category \"" + std::string(s) + "\"");
}

ProximityCategory classify(const geometry::Box3D& box, double theta, const ClassifierConfig& cfg) {
  const double r = geometry::ground_range(box.center);
  if (r < cfg.r_exclusion) return ProximityCategory::Dangerous;
  if (r >= cfg.r_warning) return ProximityCategory::Safe;
  return theta >= 0.0 ? ProximityCategory::PotentiallyDangerous : ProximityCategory::Concerned;
}

namespace {

std::optional<double> theta_of(const geometry::Box3D& box) {
  try {
    return geometry::signed_ground_angle(box);
  } catch (const DegenerateOrientation&) {
    return std::nullopt;
  }
}

}  // namespace

ProximityCategory classify(const geometry::Box3D& box, const ClassifierConfig& cfg) {
  return classify(box, theta_of(box).value_or(0.0), cfg);
}

std::vector<std::optional<std::size_t>> match_predictions(std::span<const geometry::Box3D> gt,
                                                          std::span<const Detection> preds,
                                                          const MatcherConfig& cfg) {
  struct Pair {
    std::size_t gt;
    std::size_t pred;
    double iou;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (std::size_t j = 0; j < preds.size(); ++j) {
      const double iou = metrics::iou3d(gt[i], preds[j].box);
      if (iou >= cfg.iou_threshold) pairs.push_back({i, j, iou});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    const double sa = preds[a.pred].score;
    const double sb = preds[b.pred].score;
    if (sa != sb) return sa > sb;
    if (a.pred != b.pred) return a.pred < b.pred;
    if (a.iou != b.iou) return a.iou > b.iou;
    return a.gt < b.gt;
  });
  std::vector<std::optional<std::size_t>> out(gt.size());
  std::vector<bool> used(preds.size(), false);
  for (const Pair& p : pairs) {
    if (out[p.gt] || used[p.pred]) continue;
    out[p.gt] = p.pred;
    used[p.pred] = true;
  }
  return out;
}

namespace {

void tally(FrameReport& report, const ProximityRecord& rec) {
  ++report.counts[index_of(rec.category)];
  if (rec.category == ProximityCategory::Dangerous ||
      rec.category == ProximityCategory::PotentiallyDangerous) {
    report.events.push_back({rec.instance_id, rec.category, rec.r});
  }
}

ProximityRecord record_for(std::int64_t id, const Detection& d, const ClassifierConfig& cfg) {
  ProximityRecord rec;
  rec.instance_id = id;
  rec.matched = d;
  rec.r = geometry::ground_range(d.box.center);
  rec.theta = theta_of(d.box);
  rec.category = classify(d.box, rec.theta.value_or(0.0), cfg);
  return rec;
}

}  // namespace

FrameReport monitor_frame(const FrameInput& in, const MonitorConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  FrameReport report;
  report.frame_index = in.frame_index;

  if (cfg.mode == MonitorMode::Live) {
    report.records.reserve(in.detections.size());
    for (std::size_t j = 0; j < in.detections.size(); ++j) {
      report.records.push_back(
          record_for(static_cast<std::int64_t>(j), in.detections[j], cfg.classifier));
      tally(report, report.records.back());
    }
  } else {
    std::vector<geometry::Box3D> gt_boxes;
    gt_boxes.reserve(in.gt.size());
    for (const auto& g : in.gt) gt_boxes.push_back(g.box());
    const auto assignment = match_predictions(gt_boxes, in.detections, cfg.matcher);
    report.records.reserve(in.gt.size());
    report.eval_records.reserve(in.gt.size());
    for (std::size_t i = 0; i < in.gt.size(); ++i) {
      const std::int64_t id = in.gt[i].instance_id;
      ProximityRecord rec;
      if (assignment[i]) {
        rec = record_for(id, in.detections[*assignment[i]], cfg.classifier);
      } else {
        rec.instance_id = id;
        rec.r = geometry::ground_range(gt_boxes[i].center);
        rec.category = ProximityCategory::Unknown;
      }
      EvalRecord ev;
      ev.frame_index = in.frame_index;
      ev.instance_id = id;
      ev.gt_r = geometry::ground_range(gt_boxes[i].center);
      ev.truth = classify(gt_boxes[i], cfg.classifier);
      ev.predicted = rec.category;
      report.eval_records.push_back(ev);
      report.records.push_back(std::move(rec));
      tally(report, report.records.back());
    }
  }
  report.processing_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CategoryMetrics metrics_from_counts(const EvalCounts& c) {
  CategoryMetrics m;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision && m.recall) {
    const double s = *m.precision + *m.recall;
    m.f1 = s > 0.0 ? 2.0 * *m.precision * *m.recall / s : 0.0;
  }
  return m;
}

ClassificationReport evaluate_classification(std::span<const EvalRecord> records,
                                             const std::optional<metrics::RangeRegime>& range) {
  ClassificationReport rep;
  for (const EvalRecord& r : records) {
    if (r.truth == ProximityCategory::Unknown) {
      throw InvariantViolation("ground truth cannot be Unknown");
    }
    if (range && !range->contains(r.gt_r)) continue;
    ++rep.workers;
    ++rep.confusion[index_of(r.truth)][index_of(r.predicted)];
  }
  for (std::size_t c = 0; c < 4; ++c) {
    EvalCounts& k = rep.counts[c];
    k.tp = rep.confusion[c][c];
    for (std::size_t p = 0; p < 5; ++p) {
      if (p != c) k.fn += rep.confusion[c][p];
    }
    for (std::size_t t = 0; t < 4; ++t) {
      if (t != c) k.fp += rep.confusion[t][c];
    }
    rep.metrics[c] = metrics_from_counts(k);
  }
  auto mean_of = [&](auto field) -> std::optional<double> {
    double sum = 0.0;
    int n = 0;
    for (const CategoryMetrics& m : rep.metrics) {
      if (const auto& v = m.*field) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  };
  rep.mean.precision = mean_of(&CategoryMetrics::precision);
  rep.mean.recall = mean_of(&CategoryMetrics::recall);
  rep.mean.f1 = mean_of(&CategoryMetrics::f1);
  return rep;
}

std::string classification_table_csv(const ClassificationReport& report,
                                     const metrics::RangeRegime& range, double r_exclusion,
                                     std::string_view dataset_label, bool header) {
  std::ostringstream oss;
  auto fmt = [](const std::optional<double>& v) {
    return v ? metrics::format_fixed(*v, 2) : std::string("undefined");
  };
  std::ostringstream rex;
  rex << r_exclusion;
  const std::string prefix = (dataset_label.empty() ? std::string() : std::string(dataset_label) + ",") +
                             "\"" + range.label() + "\"," + rex.str() + ",";
  if (header) {
    if (!dataset_label.empty()) oss << "Dataset,";
    oss << "Range,R_exclusion,Proximity category,TP,FP,FN,Precision,Recall,F1\n";
  }
  for (std::size_t c = 0; c < 4; ++c) {
    const EvalCounts& k = report.counts[c];
    const CategoryMetrics& m = report.metrics[c];
    oss << prefix << short_name(kKnownCategories[c]) << "," << k.tp << "," << k.fp << "," << k.fn
        << "," << fmt(m.precision) << "," << fmt(m.recall) << "," << fmt(m.f1) << "\n";
  }
  oss << prefix << "Mean,/,/,/," << fmt(report.mean.precision) << "," << fmt(report.mean.recall)
      << "," << fmt(report.mean.f1) << "\n";
  return oss.str();
}

std::string write_records(std::span<const EvalRecord> records, const ClassifierConfig& cls,
                          const MatcherConfig& match, std::string_view dataset_label) {
  Json doc = Json::object();
  doc["dataset"] = dataset_label;
  doc["r_exclusion"] = cls.r_exclusion;
  doc["r_warning"] = cls.r_warning;
  doc["iou_threshold"] = match.iou_threshold;
  Json list = Json::array();
  for (const EvalRecord& r : records) {
    Json j = Json::object();
    j["frame_index"] = r.frame_index;
    j["instance_id"] = r.instance_id;
    j["gt_r"] = r.gt_r;
    j["truth"] = short_name(r.truth);
    j["predicted"] = short_name(r.predicted);
    list.push_back(std::move(j));
  }
  doc["records"] = std::move(list);
  return detail::dump(doc);
}

RecordsDocument read_records(std::string_view text) {
  const Json doc = detail::parse_json(text, "records");
  constexpr std::string_view kWhere = "records";
  RecordsDocument out;
  out.dataset = detail::require_string(doc, "dataset", kWhere);
  out.classifier.r_exclusion = detail::require_number(doc, "r_exclusion", kWhere);
  out.classifier.r_warning = detail::require_number(doc, "r_warning", kWhere);
  out.matcher.iou_threshold = detail::require_number(doc, "iou_threshold", kWhere);
  const Json& list = detail::require(doc, "records", kWhere);
  if (!list.is_array()) throw SchemaError("records.records must be an array");
  for (const Json& j : list) {
    EvalRecord r;
    r.frame_index = detail::require_integer(j, "frame_index", "record");
    r.instance_id = detail::require_integer(j, "instance_id", "record");
    r.gt_r = detail::require_number(j, "gt_r", "record");
    r.truth = parse_category(detail::require_string(j, "truth", "record"));
    r.predicted = parse_category(detail::require_string(j, "predicted", "record"));
    if (r.truth == ProximityCategory::Unknown) {
      throw SchemaError("record truth cannot be Unknown");
    }
    out.records.push_back(r);
  }
  return out;
}

}  // namespace proxmon::proximity
