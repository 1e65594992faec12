#pragma once

#include <span>
#include <string>
#include <vector>

#include "moft/frame_io.hpp"
#include "moft/tracker.hpp"
#include "moft/types.hpp"

namespace moft {

struct MetricSample {
  std::size_t frame = 0;
  double overlap = 0.0;
  double cle = 0.0;
};

enum class CurveKind { Success, Precision };

struct CurvePoint {
  double threshold;
  double rate;
};

struct CurveSeries {
  CurveKind kind;
  std::vector<CurvePoint> points;
  double auc = 0.0;

  /// Rate at the grid threshold closest to t.
  double rate_at(double t) const;
};

/// Intersection over union in exact pixel counts.
double overlap(const BoundingBox& tracked, const BoundingBox& truth);
/// Distance between box centres.
double cle(const BoundingBox& tracked, const BoundingBox& truth);

/// Scores frames [first_frame, n). Frame 0 is the given initial box, so it is skipped by default.
std::vector<MetricSample> score(std::span<const BoundingBox> tracked, std::span<const BoundingBox> truth,
                                std::size_t first_frame = 1);

/// 101 thresholds 0.00..1.00, rate = #{S > t} / N.
CurveSeries success_curve(std::span<const MetricSample> samples);
/// 51 thresholds 0..50 px, rate = #{CLE <= t} / N.
CurveSeries precision_curve(std::span<const MetricSample> samples);

std::string format_curve(const CurveSeries& curve);
std::string curve_svg(const CurveSeries& curve);

struct SweepRow {
  int interval;
  int radius;
  double auc;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (interval, radius)
  std::size_t best = 0;        // first row with the maximal AUC
};

SweepTable sweep(std::span<const Frame> frames, const BoundingBox& init, std::span<const BoundingBox> truth,
                 std::span<const int> intervals, std::span<const int> radii, const TrackConfig& base);

std::string format_sweep(const SweepTable& table);

}  // namespace moft
