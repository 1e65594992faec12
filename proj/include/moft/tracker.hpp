#pragma once

#include <functional>
#include <span>
#include <vector>

#include "moft/flow_render.hpp"
#include "moft/frame_io.hpp"
#include "moft/integral_image.hpp"
#include "moft/optical_flow.hpp"

namespace moft {

struct TrackConfig {
  int interval = 1;
  int radius = 5;
  FlowConfig flow;
  HsvParams hsv;

  void validate() const;
};

enum class Provenance { Anchored, Measured, Held };

struct TrackResult {
  std::vector<BoundingBox> boxes;
  std::vector<Provenance> provenance;
};

struct SearchStats {
  int candidates = 0;
};

/// Places a box of prev's extent at the minimum-brightness top-left within
/// the Chebyshev radius r of prev, clipped to the image. Ties go to the
/// candidate nearest prev, then to the smallest (dy, dx).
BoundingBox search_min(const IntegralImage& ii, const BoundingBox& prev, int radius, SearchStats* stats = nullptr);

/// Optional per-step observer; receives the rendered flow of the compared pair.
using StepObserver = std::function<void(std::size_t frame, const RgbImage& rendered)>;

/// flow -> colour -> integral -> argmin for one compared pair.
BoundingBox track_step(const Frame& reference, const Frame& current, const BoundingBox& prev, const TrackConfig& cfg,
                       const StepObserver& observer = {}, std::size_t frame = 0);

/// Sequential tracker state: the box at the latest frame plus its history.
class Tracker {
 public:
  Tracker(const BoundingBox& init, int width, int height, TrackConfig cfg);

  /// Advances to `frame_index` by comparing `reference` against `current`.
  const BoundingBox& step(const Frame& reference, const Frame& current, std::size_t frame_index,
                          const StepObserver& observer = {});

  const BoundingBox& current() const { return history_.back().second; }
  std::size_t current_frame() const { return history_.back().first; }
  const std::vector<std::pair<std::size_t, BoundingBox>>& history() const { return history_; }

 private:
  TrackConfig cfg_;
  int width_, height_;
  std::vector<std::pair<std::size_t, BoundingBox>> history_;
};

/// Every frame t >= 1 compares frame max(t - interval, 0) with frame t and
/// searches around the box at t - 1.
TrackResult track_sequence(std::span<const Frame> frames, const BoundingBox& init, const TrackConfig& cfg,
                           const StepObserver& observer = {});

}  // namespace moft
