#include "proxmon/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "json_util.hpp"
#include "proxmon/detector.hpp"
#include "proxmon/errors.hpp"
#include "proxmon/simulation.hpp"

namespace proxmon::cli {

namespace fs = std::filesystem;
using detail::Json;

std::vector<metrics::APFrame> build_ap_frames(const dataset::Dataset& ds,
                                              const std::vector<std::vector<Detection>>& dets) {
  if (dets.size() != ds.frames.size()) {
    throw InvariantViolation("detections and dataset differ in frame count");
  }
  std::vector<metrics::APFrame> frames;
  frames.reserve(ds.frames.size());
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    metrics::APFrame f;
    for (const auto& b : ds.frames[i].boxes) f.gt.push_back(b.box());
    f.detections = dets[i];
    f.camera = ds.camera(i);
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<proximity::EvalRecord> collect_eval_records(
    const dataset::Dataset& ds, const std::vector<std::vector<Detection>>& dets,
    const proximity::ClassifierConfig& classifier, const proximity::MatcherConfig& matcher) {
  if (dets.size() != ds.frames.size()) {
    throw InvariantViolation("detections and dataset differ in frame count");
  }
  classifier.validate();
  matcher.validate();
  const proximity::MonitorConfig cfg{classifier, matcher, proximity::MonitorMode::Eval};
  std::vector<proximity::EvalRecord> out;
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    const auto& f = ds.frames[i];
    auto rep = proximity::monitor_frame({f.frame_index, f.boxes, dets[i]}, cfg);
    out.insert(out.end(), rep.eval_records.begin(), rep.eval_records.end());
  }
  return out;
}

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + p.string());
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + p.string());
    out << text;
    if (!out) throw IoFailure("write failed for " + p.string());
  }
  fs::rename(tmp, p);
}

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  throw ConfigError(std::string("no output directory: pass --out or set ") + kOutputDirEnv);
}

std::string fmt_double(double v) {
  std::ostringstream oss;
  oss << v;
  return oss.str();
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  std::string preset = "table3-front";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> frames;
  std::optional<double> dt;
  std::optional<int> workers;
  std::string out;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  simulation::SimConfig cfg = simulation::preset(o.preset);
  if (!o.config.empty()) cfg = simulation::config_from_json(read_text(o.config), cfg);
  if (o.seed) cfg.seed = *o.seed;
  if (o.frames) cfg.frame_count = *o.frames;
  if (o.dt) cfg.dt = *o.dt;
  if (o.workers) cfg.worker_count = *o.workers;
  cfg.validate();

  const fs::path dir = resolve_out(o.out);
  if (!fs::is_directory(dir)) {
    throw IoFailure("output directory " + dir.string() + " does not exist");
  }
  std::vector<std::string> entries{"sim_config.json"};
  for (const auto& m : cfg.vehicle.mounts) entries.emplace_back(dataset::to_string(m.side));
  for (const auto& e : entries) {
    if (fs::exists(dir / e)) throw IoFailure((dir / e).string() + " already exists");
  }

  const std::string config_doc = simulation::config_to_json(cfg);
  out << "# proxmon generate\n# preset: " << o.preset << "\n# seed: " << cfg.seed
      << "\n# effective config: " << Json::parse(config_doc).dump() << "\n";

  const auto datasets = simulation::run(cfg);
  const fs::path staging = dir / ".proxmon-staging";
  fs::remove_all(staging);
  try {
    fs::create_directory(staging);
    write_text(staging / "sim_config.json", config_doc);
    for (const auto& ds : datasets) {
      const fs::path sub = staging / std::string(dataset::to_string(ds.manifest.camera_side));
      fs::create_directory(sub);
      dataset::write_dataset(sub, ds);
    }
    for (const auto& e : entries) fs::rename(staging / e, dir / e);
    fs::remove_all(staging);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  for (const auto& ds : datasets) {
    out << "wrote " << ds.frames.size() << " frames to "
        << (dir / std::string(dataset::to_string(ds.manifest.camera_side))).string() << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectOptions {
  std::string dataset;
  std::string noise = "paper-trend";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_detect(const DetectOptions& o, std::ostream& out) {
  detector::NoiseModel nm = detector::calibrate_preset(o.noise);
  nm.seed = o.seed;
  const dataset::Dataset ds = dataset::read_dataset(o.dataset);
  const fs::path dst = o.out.empty() ? fs::path(o.dataset) / "detections.json" : fs::path(o.out);
  out << "# proxmon detect\n# noise: " << o.noise << "\n# seed: " << o.seed
      << "\n# noise model: " << detector::describe(nm) << "\n";
  const auto dets = detector::detect_dataset(ds, nm);
  const auto idx = detector::frame_indices(ds);
  write_text(dst, detector::write_detections(idx, dets));
  std::size_t n = 0;
  for (const auto& d : dets) n += d.size();
  out << "wrote " << n << " detections over " << dets.size() << " frames to " << dst.string()
      << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// monitor

struct MonitorOptions {
  std::string dataset;
  std::string detections;
  std::string mode = "live";
  double r_exclusion = 4.0;
  std::optional<double> r_warning;
  double iou_threshold = 0.25;
  std::string out;
};

int cmd_monitor(const MonitorOptions& o, std::ostream& out) {
  proximity::MonitorConfig cfg;
  cfg.classifier = {o.r_exclusion, o.r_warning.value_or(2.0 * o.r_exclusion)};
  cfg.matcher = {o.iou_threshold};
  if (o.mode == "live") {
    cfg.mode = proximity::MonitorMode::Live;
  } else if (o.mode == "eval") {
    cfg.mode = proximity::MonitorMode::Eval;
  } else {
    throw ConfigError("--mode must be live or eval");
  }
  cfg.classifier.validate();
  cfg.matcher.validate();

  const dataset::Dataset ds = dataset::read_dataset(o.dataset);
  const auto idx = detector::frame_indices(ds);
  const auto dets = detector::read_detections(read_text(o.detections), idx);

  out << "# proxmon monitor\n# mode: " << o.mode << "\n# r_exclusion: "
      << fmt_double(cfg.classifier.r_exclusion)
      << "\n# r_warning: " << fmt_double(cfg.classifier.r_warning)
      << "\n# iou_threshold: " << fmt_double(cfg.matcher.iou_threshold) << "\n";

  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoFailure("cannot write " + o.out);
    sink = &file;
  }

  std::array<std::size_t, 5> totals{};
  std::size_t events = 0;
  double busy = 0.0;
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    const auto& f = ds.frames[i];
    const auto rep = proximity::monitor_frame({f.frame_index, f.boxes, dets[i]}, cfg);
    busy += rep.processing_seconds;
    Json line = Json::object();
    line["frame_index"] = rep.frame_index;
    Json counts = Json::object();
    for (std::size_t c = 0; c < 5; ++c) {
      counts[std::string(proximity::short_name(static_cast<proximity::ProximityCategory>(c)))] =
          rep.counts[c];
      totals[c] += rep.counts[c];
    }
    line["counts"] = std::move(counts);
    Json ev = Json::array();
    for (const auto& e : rep.events) {
      ev.push_back({{"instance_id", e.instance_id},
                    {"category", proximity::short_name(e.category)},
                    {"r", e.r}});
    }
    events += rep.events.size();
    line["events"] = std::move(ev);
    line["processing_ms"] = rep.processing_seconds * 1e3;
    *sink << line.dump() << "\n";
  }
  out << "# summary: frames=" << ds.frames.size();
  for (std::size_t c = 0; c < 5; ++c) {
    out << " " << proximity::short_name(static_cast<proximity::ProximityCategory>(c)) << "="
        << totals[c];
  }
  out << " events=" << events;
  if (busy > 0.0) out << " fps=" << static_cast<double>(ds.frames.size()) / busy;
  out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// evaluate / report

struct TableSettings {
  std::vector<std::string> labels;
  std::vector<double> r_exclusions;
  double warning_ratio = 2.0;
  std::optional<double> r_warning;
  double iou_threshold = 0.25;
  std::vector<std::string> ranges;
  std::vector<std::string> ap_ranges;
  double summary_r_exclusion = 7.0;
  std::string summary_range = "0:50";

  proximity::ClassifierConfig classifier(double r_excl) const {
    return {r_excl, r_warning.value_or(r_excl * warning_ratio)};
  }

  std::vector<double> all_r_exclusions() const {
    std::vector<double> out = r_exclusions;
    if (std::find(out.begin(), out.end(), summary_r_exclusion) == out.end()) {
      out.push_back(summary_r_exclusion);
    }
    return out;
  }

  Json to_json() const {
    Json j = Json::object();
    j["labels"] = labels;
    j["r_exclusion"] = r_exclusions;
    j["warning_ratio"] = warning_ratio;
    j["r_warning"] = r_warning ? Json(*r_warning) : Json(nullptr);
    j["iou_threshold"] = iou_threshold;
    j["ranges"] = ranges;
    j["ap_ranges"] = ap_ranges;
    j["summary_r_exclusion"] = summary_r_exclusion;
    j["summary_range"] = summary_range;
    return j;
  }

  static TableSettings from_json(const Json& j) {
    TableSettings s;
    try {
      s.labels = j.at("labels").get<std::vector<std::string>>();
      s.r_exclusions = j.at("r_exclusion").get<std::vector<double>>();
      s.warning_ratio = j.at("warning_ratio").get<double>();
      if (!j.at("r_warning").is_null()) s.r_warning = j.at("r_warning").get<double>();
      s.iou_threshold = j.at("iou_threshold").get<double>();
      s.ranges = j.at("ranges").get<std::vector<std::string>>();
      s.ap_ranges = j.at("ap_ranges").get<std::vector<std::string>>();
      s.summary_r_exclusion = j.at("summary_r_exclusion").get<double>();
      s.summary_range = j.at("summary_range").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("effective_config.json: ") + e.what());
    }
    return s;
  }
};

std::string records_file_name(const std::string& label, double r_excl) {
  return "records_" + label + "_rexcl" + fmt_double(r_excl) + ".json";
}

// Records keyed by (dataset label, R_exclusion).
using RecordStore = std::map<std::pair<std::string, double>, std::vector<proximity::EvalRecord>>;

void write_classification_tables(const TableSettings& s, const RecordStore& store,
                                 const fs::path& dir) {
  std::string per_category;
  bool header = true;
  for (const auto& label : s.labels) {
    for (const auto& range_text : s.ranges) {
      const auto range = metrics::RangeRegime::parse(range_text);
      for (double r : s.r_exclusions) {
        const auto& recs = store.at({label, r});
        const auto rep = proximity::evaluate_classification(recs, range);
        per_category += proximity::classification_table_csv(rep, range, r, label, header);
        header = false;
      }
    }
  }
  write_text(dir / "classification.csv", per_category);

  std::ostringstream summary;
  summary << "Dataset,Mean precision,Mean recall,Mean F1\n";
  const auto summary_regime = metrics::RangeRegime::parse(s.summary_range);
  double sum[3] = {0, 0, 0};
  int n[3] = {0, 0, 0};
  auto fmt = [](const std::optional<double>& v) {
    return v ? metrics::format_fixed(*v, 2) : std::string("undefined");
  };
  for (const auto& label : s.labels) {
    const auto rep =
        proximity::evaluate_classification(store.at({label, s.summary_r_exclusion}), summary_regime);
    const std::optional<double> vals[3] = {rep.mean.precision, rep.mean.recall, rep.mean.f1};
    summary << label;
    for (int k = 0; k < 3; ++k) {
      summary << "," << fmt(vals[k]);
      if (vals[k]) {
        sum[k] += *vals[k];
        ++n[k];
      }
    }
    summary << "\n";
  }
  summary << "Mean";
  for (int k = 0; k < 3; ++k) {
    summary << "," << fmt(n[k] ? std::optional<double>(sum[k] / n[k]) : std::nullopt);
  }
  summary << "\n";
  write_text(dir / "classification_summary.csv", summary.str());
}

struct EvaluateOptions {
  std::vector<std::string> datasets;
  std::vector<std::string> detections;
  std::string noise;
  std::uint64_t seed = 0;
  std::vector<double> r_exclusions{4.0, 7.0, 10.0};
  double warning_ratio = 2.0;
  std::optional<double> r_warning;
  double iou_threshold = 0.25;
  std::vector<std::string> ranges{"0:inf", "0:50"};
  std::vector<std::string> ap_ranges;
  std::optional<double> summary_r_exclusion;
  std::string summary_range = "0:50";
  std::string out;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.datasets.empty()) throw ConfigError("evaluate needs at least one --dataset");
  if (o.detections.empty() == o.noise.empty()) {
    throw ConfigError("pass either --detections (one per dataset) or --noise");
  }
  if (!o.detections.empty() && o.detections.size() != o.datasets.size()) {
    throw ConfigError("--detections must be given once per --dataset");
  }
  if (o.r_warning && o.r_exclusions.size() != 1) {
    throw ConfigError("--r-warning requires a single --r-exclusion");
  }

  TableSettings s;
  s.r_exclusions = o.r_exclusions;
  s.warning_ratio = o.warning_ratio;
  s.r_warning = o.r_warning;
  s.iou_threshold = o.iou_threshold;
  s.ranges = o.ranges;
  s.ap_ranges = o.ap_ranges;
  if (s.ap_ranges.empty()) {
    for (const auto& r : metrics::default_ap_regimes()) {
      s.ap_ranges.push_back(fmt_double(r.r_min) + ":" +
                            (std::isinf(r.r_max) ? std::string("inf") : fmt_double(r.r_max)));
    }
  }
  // An explicit warning radius only fits the single swept R_exclusion.
  s.summary_r_exclusion = o.summary_r_exclusion.value_or(o.r_warning ? o.r_exclusions.front() : 7.0);
  s.summary_range = o.summary_range;
  for (double r : s.all_r_exclusions()) s.classifier(r).validate();
  proximity::MatcherConfig matcher{s.iou_threshold};
  matcher.validate();
  std::vector<metrics::RangeRegime> ap_regimes;
  for (const auto& r : s.ap_ranges) ap_regimes.push_back(metrics::RangeRegime::parse(r));
  for (const auto& r : s.ranges) metrics::RangeRegime::parse(r);
  metrics::RangeRegime::parse(s.summary_range);

  std::optional<detector::NoiseModel> nm;
  if (!o.noise.empty()) {
    nm = detector::calibrate_preset(o.noise);
    nm->seed = o.seed;
  }

  const fs::path dir = resolve_out(o.out);
  fs::create_directories(dir);

  std::vector<dataset::Dataset> datasets;
  for (const auto& p : o.datasets) datasets.push_back(dataset::read_dataset(p));
  std::map<std::string, int> seen;
  for (const auto& ds : datasets) {
    std::string label = ds.manifest.name;
    if (int k = seen[label]++; k > 0) label += "_" + std::to_string(k + 1);
    s.labels.push_back(label);
  }

  Json effective = s.to_json();
  if (nm) {
    effective["noise"] = o.noise;
    effective["noise_model"] = Json::parse(detector::describe(*nm));
  }
  out << "# proxmon evaluate\n";
  for (std::size_t i = 0; i < o.datasets.size(); ++i) {
    out << "# dataset: " << o.datasets[i] << " (" << s.labels[i] << ")";
    if (!o.detections.empty()) out << " detections: " << o.detections[i];
    out << "\n";
  }
  out << "# effective config: " << effective.dump() << "\n";
  write_text(dir / "effective_config.json", detail::dump(effective));

  RecordStore store;
  std::string ap_csv;
  std::string pr;
  pr = "Dataset,Range,IoU threshold,Rank,Score,TP,FP,Recall,Precision\n";
  std::size_t frames_total = 0;
  double busy = 0.0;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const auto& ds = datasets[i];
    const auto& label = s.labels[i];
    const auto idx = detector::frame_indices(ds);
    std::vector<std::vector<Detection>> dets;
    if (nm) {
      dets = detector::detect_dataset(ds, *nm);
      write_text(dir / ("detections_" + label + ".json"), detector::write_detections(idx, dets));
    } else {
      dets = detector::read_detections(read_text(o.detections[i]), idx);
    }

    const auto ap_frames = build_ap_frames(ds, dets);
    const auto rows = metrics::ap_report(ap_frames, ap_regimes);
    ap_csv += metrics::ap_table_csv(rows, label, i == 0);
    for (const auto& row : rows) {
      for (const auto* res : {&row.strict, &row.loose}) {
        const double thr = res == &row.strict ? metrics::kStrictIoU : metrics::kLooseIoU;
        for (std::size_t k = 0; k < res->curve.size(); ++k) {
          const auto& p = res->curve[k];
          pr += label + ",\"" + row.range.label() + "\"," + fmt_double(thr) + "," +
                std::to_string(k + 1) + "," + fmt_double(p.score) + "," + std::to_string(p.tp) +
                "," + std::to_string(p.fp) + "," + fmt_double(p.recall) + "," +
                fmt_double(p.precision) + "\n";
        }
      }
    }

    for (double r : s.all_r_exclusions()) {
      const auto t0 = std::chrono::steady_clock::now();
      auto recs = collect_eval_records(ds, dets, s.classifier(r), matcher);
      busy += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      frames_total += ds.frames.size();
      write_text(dir / records_file_name(label, r),
                 proximity::write_records(recs, s.classifier(r), matcher, label));
      store[{label, r}] = std::move(recs);
    }
  }
  write_text(dir / "detection_ap.csv", ap_csv);
  write_text(dir / "pr_curves.csv", pr);
  write_classification_tables(s, store, dir);

  out << "wrote detection_ap.csv, classification.csv, classification_summary.csv, pr_curves.csv to " << dir.string() << "\n";
  if (busy > 0.0) {
    out << "# monitoring throughput: " << static_cast<double>(frames_total) / busy
        << " frames/s (matching + classification)\n";
  }
  return kOk;
}

struct ReportOptions {
  std::string eval_dir;
  std::string out;
};

int cmd_report(const ReportOptions& o, std::ostream& out) {
  const fs::path src = o.eval_dir;
  const Json eff = detail::parse_json(read_text(src / "effective_config.json"), "effective config");
  const TableSettings s = TableSettings::from_json(eff);
  RecordStore store;
  for (const auto& label : s.labels) {
    for (double r : s.all_r_exclusions()) {
      auto doc = proximity::read_records(read_text(src / records_file_name(label, r)));
      store[{label, r}] = std::move(doc.records);
    }
  }
  const fs::path dst = o.out.empty() ? src : fs::path(o.out);
  fs::create_directories(dst);
  write_classification_tables(s, store, dst);
  out << "# proxmon report\n# effective config: " << eff.dump() << "\nwrote classification.csv, classification_summary.csv to "
      << dst.string() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Camera-based worker proximity monitoring toolkit", "proxmon"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Simulate a scene and write annotated datasets");
  g->add_option("--preset", gen.preset, "Scene preset")->capture_default_str();
  g->add_option("--config", gen.config, "Simulation config JSON (overrides the preset)");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--frames", gen.frames, "Frames per camera");
  g->add_option("--dt", gen.dt, "Capture interval in seconds");
  g->add_option("--workers", gen.workers, "Number of workers");
  g->add_option("--out", gen.out, "Existing output directory");

  DetectOptions det;
  auto* d = app.add_subcommand("detect", "Run the detector stand-in over a dataset");
  d->add_option("--dataset", det.dataset, "Dataset directory")->required();
  d->add_option("--noise", det.noise, "Noise preset")->capture_default_str();
  d->add_option("--seed", det.seed, "Noise seed")->capture_default_str();
  d->add_option("--out", det.out, "Detections file (default <dataset>/detections.json)");

  MonitorOptions mon;
  auto* m = app.add_subcommand("monitor", "Classify worker proximity frame by frame");
  m->add_option("--dataset", mon.dataset, "Dataset directory")->required();
  m->add_option("--detections", mon.detections, "Detections file")->required();
  m->add_option("--mode", mon.mode, "live or eval")->capture_default_str();
  m->add_option("--r-exclusion", mon.r_exclusion, "Exclusion radius (m)")->capture_default_str();
  m->add_option("--r-warning", mon.r_warning, "Warning radius (m), default 2x exclusion");
  m->add_option("--iou-threshold", mon.iou_threshold, "Matching IoU")->capture_default_str();
  m->add_option("--out", mon.out, "Per-frame JSON lines (default stdout)");

  EvaluateOptions ev;
  auto* e = app.add_subcommand("evaluate", "Detection AP and proximity classification tables");
  e->add_option("--dataset", ev.datasets, "Dataset directory (repeatable)")->required();
  e->add_option("--detections", ev.detections, "Detections file per dataset");
  e->add_option("--noise", ev.noise, "Run the detector stand-in with this preset");
  e->add_option("--seed", ev.seed, "Noise seed")->capture_default_str();
  e->add_option("--r-exclusion", ev.r_exclusions, "Exclusion radii (m)")
      ->capture_default_str()
      ->delimiter(',');
  e->add_option("--warning-ratio", ev.warning_ratio, "R_warning / R_exclusion")
      ->capture_default_str();
  e->add_option("--r-warning", ev.r_warning, "Explicit warning radius (single R_exclusion only)");
  e->add_option("--iou-threshold", ev.iou_threshold, "Matching IoU")->capture_default_str();
  e->add_option("--range", ev.ranges, "Classification ranges lo:hi")
      ->capture_default_str()
      ->delimiter(',');
  e->add_option("--ap-range", ev.ap_ranges, "AP ranges lo:hi")->delimiter(',');
  e->add_option("--summary-r-exclusion", ev.summary_r_exclusion,
                 "R_exclusion of the per-dataset summary (default 7)");
  e->add_option("--summary-range", ev.summary_range, "Range of the per-dataset summary")
      ->capture_default_str();
  e->add_option("--out", ev.out, "Output directory");

  ReportOptions rep;
  auto* r = app.add_subcommand("report", "Regenerate classification tables from saved records");
  r->add_option("--eval-dir", rep.eval_dir, "Directory written by evaluate")->required();
  r->add_option("--out", rep.out, "Output directory (default the eval dir)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kConfigError;
  }

  try {
    if (g->parsed()) return cmd_generate(gen, out);
    if (d->parsed()) return cmd_detect(det, out);
    if (m->parsed()) return cmd_monitor(mon, out);
    if (e->parsed()) return cmd_evaluate(ev, out);
    if (r->parsed()) return cmd_report(rep, out);
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const InputFormatError& ex) {
    err << "input error: " << ex.what() << "\n";
    return kInputFormatError;
  } catch (const fs::filesystem_error& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace proxmon::cli
