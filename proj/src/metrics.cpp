#include "proxmon/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "proxmon/errors.hpp"

namespace proxmon::metrics {

using geometry::Vec3;
using Vec2 = Eigen::Vector2d;

namespace {

// Yaw used by the bird's-eye reduction. Falls back to the box's x axis when
// the forward axis is vertical.
double reduction_yaw(const geometry::UnitQuaternion& q) {
  const Vec3 f = q.rotate(Vec3::UnitZ());
  if (std::hypot(f.x(), f.z()) >= geometry::kDegenerateForwardTol) {
    return std::atan2(f.x(), f.z());
  }
  const Vec3 r = q.rotate(Vec3::UnitX());
  return std::atan2(-r.z(), r.x());
}

std::array<Vec2, 4> bev_rectangle(const Box3D& b) {
  const double yaw = reduction_yaw(b.rotation);
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double hw = b.size.width / 2;
  const double hl = b.size.length / 2;
  // Local (x, z) -> ground: x' = x c + z s, z' = -x s + z c.
  static constexpr double kSx[4] = {-1, 1, 1, -1};
  static constexpr double kSz[4] = {-1, -1, 1, 1};
  std::array<Vec2, 4> out;
  for (int i = 0; i < 4; ++i) {
    const double lx = kSx[i] * hw;
    const double lz = kSz[i] * hl;
    out[i] = Vec2(b.center.x() + lx * c + lz * s, b.center.z() - lx * s + lz * c);
  }
  return out;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(std::span<const Vec2> p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return a / 2;
}

double analytic_iou(const Box3D& a, const Box3D& b) {
  const double ay0 = a.center.y() - a.size.height / 2, ay1 = a.center.y() + a.size.height / 2;
  const double by0 = b.center.y() - b.size.height / 2, by1 = b.center.y() + b.size.height / 2;
  const double dy = std::min(ay1, by1) - std::max(ay0, by0);
  if (dy <= 0.0) return 0.0;
  const double ra = std::hypot(a.size.width, a.size.length) / 2;
  const double rb = std::hypot(b.size.width, b.size.length) / 2;
  const double dx = a.center.x() - b.center.x();
  const double dz = a.center.z() - b.center.z();
  if (dx * dx + dz * dz >= (ra + rb) * (ra + rb)) return 0.0;

  const auto pa = bev_rectangle(a);
  const auto pb = bev_rectangle(b);
  const double inter = convex_overlap_area(pa, pb) * dy;
  const double uni = a.size.volume() + b.size.volume() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double monte_carlo_iou(const Box3D& a, const Box3D& b, const MonteCarlo& mc) {
  if (mc.samples < kMinMonteCarloSamples) {
    throw ConfigError("monte-carlo IoU needs at least 10000 samples");
  }
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Box3D* box : {&a, &b}) {
    for (const Vec3& c : geometry::box_corners(*box)) {
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
    }
  }
  const geometry::Mat3 ra = a.rotation.matrix().transpose();
  const geometry::Mat3 rb = b.rotation.matrix().transpose();
  const Vec3 ha(a.size.width / 2, a.size.height / 2, a.size.length / 2);
  const Vec3 hb(b.size.width / 2, b.size.height / 2, b.size.length / 2);
  auto inside = [](const geometry::Mat3& rt, const Vec3& c, const Vec3& h, const Vec3& p) {
    const Vec3 l = rt * (p - c);
    return std::abs(l.x()) <= h.x() && std::abs(l.y()) <= h.y() && std::abs(l.z()) <= h.z();
  };

  std::mt19937_64 rng(mc.seed);
  const Vec3 span = hi - lo;
  constexpr double kScale = 0x1.0p-53;
  std::size_t n_a = 0, n_b = 0, n_ab = 0;
  for (std::size_t i = 0; i < mc.samples; ++i) {
    const Vec3 p(lo.x() + span.x() * static_cast<double>(rng() >> 11) * kScale,
                 lo.y() + span.y() * static_cast<double>(rng() >> 11) * kScale,
                 lo.z() + span.z() * static_cast<double>(rng() >> 11) * kScale);
    const bool in_a = inside(ra, a.center, ha, p);
    const bool in_b = inside(rb, b.center, hb, p);
    n_a += in_a;
    n_b += in_b;
    n_ab += in_a && in_b;
  }
  const std::size_t n_union = n_a + n_b - n_ab;
  return n_union == 0 ? 0.0 : static_cast<double>(n_ab) / static_cast<double>(n_union);
}

}  // namespace

double convex_overlap_area(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  if (subject.size() < 3 || clip.size() < 3) return 0.0;
  const double orient = signed_area(clip) >= 0.0 ? 1.0 : -1.0;
  std::vector<Vec2> poly(subject.begin(), subject.end());
  std::vector<Vec2> next;
  for (std::size_t e = 0; e < clip.size() && !poly.empty(); ++e) {
    const Vec2& c0 = clip[e];
    const Vec2& c1 = clip[(e + 1) % clip.size()];
    const Vec2 edge = c1 - c0;
    auto side = [&](const Vec2& p) { return orient * cross(edge, p - c0); };
    next.clear();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& p = poly[i];
      const Vec2& q = poly[(i + 1) % poly.size()];
      const double sp = side(p);
      const double sq = side(q);
      if (sp >= 0.0) next.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        next.push_back(p + t * (q - p));
      }
    }
    poly.swap(next);
  }
  if (poly.size() < 3) return 0.0;
  return std::abs(signed_area(poly));
}

double iou3d(const Box3D& a, const Box3D& b, const IoUMethod& method) {
  if (a.frame != b.frame) throw InvariantViolation("iou3d: boxes are in different frames");
  if (!a.size.valid() || !b.size.valid()) throw InvariantViolation("iou3d: non-positive size");
  if (const auto* mc = std::get_if<MonteCarlo>(&method)) return monte_carlo_iou(a, b, *mc);
  return analytic_iou(a, b);
}

std::string RangeRegime::label() const {
  std::ostringstream oss;
  oss << "(" << r_min << ", ";
  if (std::isinf(r_max)) {
    oss << "inf)";
  } else {
    oss << r_max << "]";
  }
  return oss.str();
}

RangeRegime RangeRegime::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("range \"" + std::string(text) + "\" must look like lo:hi");
  }
  auto number = [&](std::string_view s) {
    const std::string str(s);
    if (str == "inf" || str == "Inf" || str == "INF") {
      return std::numeric_limits<double>::infinity();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != str.size() || str.empty()) {
      throw ConfigError("range bound \"" + str + "\" is not a number");
    }
    return v;
  };
  RangeRegime r{number(text.substr(0, colon)), number(text.substr(colon + 1))};
  if (!(r.r_min >= 0.0) || !(r.r_max > r.r_min)) {
    throw ConfigError("range \"" + std::string(text) + "\" must satisfy 0 <= lo < hi");
  }
  return r;
}

std::vector<Box3D> range_filter(std::span<const Box3D> boxes, const RangeRegime& regime) {
  std::vector<Box3D> out;
  for (const Box3D& b : boxes) {
    if (regime.contains(b)) out.push_back(b);
  }
  return out;
}

std::vector<Detection> range_filter(std::span<const Detection> dets, const RangeRegime& regime) {
  std::vector<Detection> out;
  for (const Detection& d : dets) {
    if (regime.contains(d.box)) out.push_back(d);
  }
  return out;
}

bool is_easy(const Box3D& gt, const geometry::CameraModel& cam) {
  const auto h = geometry::projected_box_height_px(gt, cam);
  return h && *h > kEasyMinHeightPx;
}

std::vector<Box3D> easy_filter(std::span<const Box3D> gt, const geometry::CameraModel& cam) {
  std::vector<Box3D> out;
  for (const Box3D& b : gt) {
    if (is_easy(b, cam)) out.push_back(b);
  }
  return out;
}

void APConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("AP IoU threshold must lie in (0, 1]");
  }
}

double interpolate_ap11(std::span<const PRPoint> curve, std::size_t gt_count) {
  if (gt_count == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k <= 10; ++k) {
    double best = 0.0;
    for (const PRPoint& p : curve) {
      // recall >= k/10, compared exactly in integers
      if (p.tp * 10 >= k * gt_count) best = std::max(best, p.precision);
    }
    sum += best;
  }
  return sum / 11.0;
}

APResult ap11(std::span<const APFrame> frames, const APConfig& cfg) {
  cfg.validate();
  struct FrameGT {
    std::vector<Box3D> boxes;
    std::vector<bool> evaluated;
    std::vector<bool> claimed;
  };
  struct Ranked {
    double score;
    std::size_t frame;
    std::size_t index;
  };

  APResult result;
  std::vector<FrameGT> gts(frames.size());
  std::vector<std::vector<Detection>> dets(frames.size());
  std::vector<Ranked> ranked;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    FrameGT& g = gts[f];
    g.boxes = range_filter(frames[f].gt, cfg.range);
    for (const Box3D& b : g.boxes) {
      const bool eval = cfg.difficulty == Difficulty::None || is_easy(b, frames[f].camera);
      g.evaluated.push_back(eval);
      result.evaluated_gt += eval;
    }
    g.claimed.assign(g.boxes.size(), false);
    result.instances += g.boxes.size();
    dets[f] = range_filter(frames[f].detections, cfg.range);
    for (std::size_t i = 0; i < dets[f].size(); ++i) ranked.push_back({dets[f][i].score, f, i});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.index < b.index;
  });

  std::size_t tp = 0, fp = 0;
  for (const Ranked& r : ranked) {
    FrameGT& g = gts[r.frame];
    const Box3D& det = dets[r.frame][r.index].box;
    double best_iou = -1.0;
    std::size_t best = g.boxes.size();
    bool hits_ignored = false;
    for (std::size_t j = 0; j < g.boxes.size(); ++j) {
      const double iou = iou3d(det, g.boxes[j]);
      if (iou < cfg.iou_threshold) continue;
      if (!g.evaluated[j]) {
        hits_ignored = true;
        continue;
      }
      if (g.claimed[j]) continue;
      if (iou > best_iou) {
        best_iou = iou;
        best = j;
      }
    }
    if (best < g.boxes.size()) {
      g.claimed[best] = true;
      ++tp;
    } else if (hits_ignored) {
      continue;
    } else {
      ++fp;
    }
    PRPoint p;
    p.score = r.score;
    p.tp = tp;
    p.fp = fp;
    p.recall = result.evaluated_gt ? static_cast<double>(tp) / result.evaluated_gt : 0.0;
    p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    result.curve.push_back(p);
  }
  result.true_positives = tp;
  result.false_positives = fp;
  if (result.evaluated_gt > 0) result.ap = interpolate_ap11(result.curve, result.evaluated_gt);
  return result;
}

std::optional<double> APRow::mean() const {
  if (!strict.ap || !loose.ap) return std::nullopt;
  return (*strict.ap + *loose.ap) / 2;
}

std::vector<RangeRegime> default_ap_regimes() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {{0, inf}, {0, 10}, {0, 20}, {0, 30}, {0, 50}, {10, 20}, {20, 50}, {30, 50}, {50, inf}};
}

std::vector<APRow> ap_report(std::span<const APFrame> frames,
                             std::span<const RangeRegime> regimes) {
  std::vector<APRow> rows;
  for (const RangeRegime& r : regimes) {
    APRow row;
    row.range = r;
    row.strict = ap11(frames, {kStrictIoU, Difficulty::Easy, r});
    row.loose = ap11(frames, {kLooseIoU, Difficulty::Easy, r});
    row.instances = row.strict.instances;
    rows.push_back(std::move(row));
  }
  return rows;
}

double round_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_to(x, decimals));
  return buf;
}

std::string ap_table_csv(std::span<const APRow> rows, std::string_view label, bool header) {
  std::ostringstream oss;
  auto pct = [](const std::optional<double>& v) {
    return v ? format_fixed(*v * 100.0, 2) : std::string("undefined");
  };
  if (header) {
    if (!label.empty()) oss << "Dataset,";
    oss << "Range,Instance,3D_AP11_easy_strict,3D_AP11_easy_loose,Mean\n";
  }
  for (const APRow& row : rows) {
    if (!label.empty()) oss << label << ",";
    oss << "\"" << row.range.label() << "\"," << row.instances << "," << pct(row.strict.ap) << ","
        << pct(row.loose.ap) << "," << pct(row.mean()) << "\n";
  }
  return oss.str();
}

}  // namespace proxmon::metrics
