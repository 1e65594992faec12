#include "moft/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace moft {

namespace {

constexpr int kSuccessSteps = 100;
constexpr int kPrecisionMax = 50;

void require_positive_area(const BoundingBox& b) {
  if (b.w <= 0 || b.h <= 0) throw ArgumentError("overlap needs boxes of positive area, got " + to_string(b));
}

double mean_rate(const std::vector<CurvePoint>& pts) {
  double sum = 0.0;
  for (const auto& p : pts) sum += p.rate;
  return sum / static_cast<double>(pts.size());
}

}  // namespace

double overlap(const BoundingBox& tracked, const BoundingBox& truth) {
  require_positive_area(tracked);
  require_positive_area(truth);
  const std::int64_t iw = std::max(0, std::min(tracked.right(), truth.right()) - std::max(tracked.x, truth.x));
  const std::int64_t ih = std::max(0, std::min(tracked.bottom(), truth.bottom()) - std::max(tracked.y, truth.y));
  const std::int64_t inter = iw * ih;
  const std::int64_t uni = tracked.area() + truth.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double cle(const BoundingBox& tracked, const BoundingBox& truth) {
  return std::hypot(tracked.center_x() - truth.center_x(), tracked.center_y() - truth.center_y());
}

std::vector<MetricSample> score(std::span<const BoundingBox> tracked, std::span<const BoundingBox> truth,
                                std::size_t first_frame) {
  if (tracked.size() != truth.size())
    throw ArgumentError(fmt::format("{} tracked boxes vs {} ground-truth boxes", tracked.size(), truth.size()));
  std::vector<MetricSample> out;
  for (std::size_t i = first_frame; i < tracked.size(); ++i)
    out.push_back({i, overlap(tracked[i], truth[i]), cle(tracked[i], truth[i])});
  return out;
}

double CurveSeries::rate_at(double t) const {
  auto it = std::min_element(points.begin(), points.end(), [t](const CurvePoint& a, const CurvePoint& b) {
    return std::abs(a.threshold - t) < std::abs(b.threshold - t);
  });
  return it == points.end() ? 0.0 : it->rate;
}

CurveSeries success_curve(std::span<const MetricSample> samples) {
  if (samples.empty()) throw ArgumentError("success curve needs at least one sample");
  CurveSeries c{CurveKind::Success, {}, 0.0};
  const auto n = static_cast<double>(samples.size());
  for (int k = 0; k <= kSuccessSteps; ++k) {
    const double t = k / static_cast<double>(kSuccessSteps);
    const auto hits = std::count_if(samples.begin(), samples.end(), [t](const MetricSample& s) { return s.overlap > t; });
    c.points.push_back({t, static_cast<double>(hits) / n});
  }
  c.auc = mean_rate(c.points);
  return c;
}

CurveSeries precision_curve(std::span<const MetricSample> samples) {
  if (samples.empty()) throw ArgumentError("precision curve needs at least one sample");
  CurveSeries c{CurveKind::Precision, {}, 0.0};
  const auto n = static_cast<double>(samples.size());
  for (int t = 0; t <= kPrecisionMax; ++t) {
    const auto hits = std::count_if(samples.begin(), samples.end(), [t](const MetricSample& s) { return s.cle <= t; });
    c.points.push_back({static_cast<double>(t), static_cast<double>(hits) / n});
  }
  c.auc = mean_rate(c.points);
  return c;
}

std::string format_curve(const CurveSeries& curve) {
  std::string out = "threshold,rate\n";
  for (const auto& p : curve.points) out += fmt::format("{},{}\n", p.threshold, p.rate);
  out += fmt::format("# auc={}\n", curve.auc);
  return out;
}

std::string curve_svg(const CurveSeries& curve) {
  constexpr double kW = 400, kH = 300, kPad = 40;
  const double xmax = curve.kind == CurveKind::Success ? 1.0 : static_cast<double>(kPrecisionMax);
  std::string pts;
  for (const auto& p : curve.points)
    pts += fmt::format("{:.2f},{:.2f} ", kPad + p.threshold / xmax * (kW - 2 * kPad),
                       kH - kPad - p.rate * (kH - 2 * kPad));
  if (!pts.empty()) pts.pop_back();
  const char* title = curve.kind == CurveKind::Success ? "Success plot" : "Precision plot";
  const char* xlabel = curve.kind == CurveKind::Success ? "Overlap threshold" : "Location error threshold (px)";
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{3} [auc={4:.3f}]</text>\n"
      "<line x1=\"{2}\" y1=\"{5}\" x2=\"{6}\" y2=\"{5}\" stroke=\"black\"/>\n"
      "<line x1=\"{2}\" y1=\"{2}\" x2=\"{2}\" y2=\"{5}\" stroke=\"black\"/>\n"
      "<text x=\"{2}\" y=\"{7}\" font-family=\"sans-serif\" font-size=\"11\">{8}</text>\n"
      "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"{9}\"/>\n"
      "</svg>\n",
      kW, kH, kPad, title, curve.auc, kH - kPad, kW - kPad, kH - 10, xlabel, pts);
  return svg;
}

SweepTable sweep(std::span<const Frame> frames, const BoundingBox& init, std::span<const BoundingBox> truth,
                 std::span<const int> intervals, std::span<const int> radii, const TrackConfig& base) {
  if (intervals.empty() || radii.empty()) throw ArgumentError("sweep needs at least one interval and one radius");
  if (truth.size() != frames.size())
    throw ArgumentError(fmt::format("ground truth has {} boxes for {} frames", truth.size(), frames.size()));
  std::vector<int> is(intervals.begin(), intervals.end()), rs(radii.begin(), radii.end());
  std::sort(is.begin(), is.end());
  is.erase(std::unique(is.begin(), is.end()), is.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  SweepTable table;
  for (int i : is)
    for (int r : rs) {
      TrackConfig cfg = base;
      cfg.interval = i;
      cfg.radius = r;
      const auto result = track_sequence(frames, init, cfg);
      const auto samples = score(result.boxes, truth);
      table.rows.push_back({i, r, success_curve(samples).auc});
    }
  for (std::size_t k = 1; k < table.rows.size(); ++k)
    if (table.rows[k].auc > table.rows[table.best].auc) table.best = k;
  return table;
}

std::string format_sweep(const SweepTable& table) {
  std::string out = "interval,radius,auc\n";
  for (const auto& row : table.rows) out += fmt::format("{},{},{}\n", row.interval, row.radius, row.auc);
  if (!table.rows.empty())
    out += fmt::format("# best={},{}\n", table.rows[table.best].interval, table.rows[table.best].radius);
  return out;
}

}  // namespace moft
