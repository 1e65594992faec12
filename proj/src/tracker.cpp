#include "moft/tracker.hpp"

#include <limits>
#include <tuple>

#include <fmt/format.h>

namespace moft {

void TrackConfig::validate() const {
  if (interval < 1) throw ArgumentError("interval must be >= 1");
  if (radius < 1) throw ArgumentError("radius must be >= 1");
  flow.validate();
  hsv.validate();
}

BoundingBox search_min(const IntegralImage& ii, const BoundingBox& prev, int radius, SearchStats* stats) {
  if (radius < 1) throw ArgumentError("search radius must be >= 1");
  const int w = ii.width(), h = ii.height();
  if (prev.w > w || prev.h > h)
    throw GeometryError(fmt::format("box {} does not fit in {}x{} frame", to_string(prev), w, h));
  if (!prev.inside(w, h)) throw BoundsError(fmt::format("previous box {} outside {}x{} frame", to_string(prev), w, h));

  const int dx_lo = std::max(-radius, -prev.x), dx_hi = std::min(radius, w - prev.right());
  const int dy_lo = std::max(-radius, -prev.y), dy_hi = std::min(radius, h - prev.bottom());

  using Key = std::tuple<std::int64_t, int, int, int>;  // brightness, dist², dy, dx
  Key best{std::numeric_limits<std::int64_t>::max(), 0, 0, 0};
  int count = 0;
  for (int dy = dy_lo; dy <= dy_hi; ++dy)
    for (int dx = dx_lo; dx <= dx_hi; ++dx) {
      const Key key{box_brightness(ii, prev.shifted(dx, dy)), dx * dx + dy * dy, dy, dx};
      if (key < best) best = key;
      ++count;
    }
  if (stats) stats->candidates = count;
  return prev.shifted(std::get<3>(best), std::get<2>(best));
}

BoundingBox track_step(const Frame& reference, const Frame& current, const BoundingBox& prev, const TrackConfig& cfg,
                       const StepObserver& observer, std::size_t frame) {
  cfg.validate();
  const auto flow = dense_flow(reference, current, cfg.flow);
  const auto rendered = render_flow(flow, cfg.hsv);
  if (observer) observer(frame, rendered);
  return search_min(build_integral(rendered), prev, cfg.radius);
}

Tracker::Tracker(const BoundingBox& init, int width, int height, TrackConfig cfg)
    : cfg_(std::move(cfg)), width_(width), height_(height) {
  cfg_.validate();
  if (!init.inside(width, height))
    throw BoundsError(fmt::format("initial box {} outside {}x{} frame", to_string(init), width, height));
  history_.emplace_back(0, init);
}

const BoundingBox& Tracker::step(const Frame& reference, const Frame& current, std::size_t frame_index,
                                 const StepObserver& observer) {
  if (frame_index <= current_frame()) throw ArgumentError("tracker frames must advance");
  if (current.width() != width_ || current.height() != height_)
    throw ShapeError(fmt::format("frame {} is {}x{}, tracker expects {}x{}", frame_index, current.width(),
                                 current.height(), width_, height_));
  history_.emplace_back(frame_index, track_step(reference, current, this->current(), cfg_, observer, frame_index));
  return history_.back().second;
}

TrackResult track_sequence(std::span<const Frame> frames, const BoundingBox& init, const TrackConfig& cfg,
                           const StepObserver& observer) {
  if (frames.size() < 2) throw ArgumentError("tracking needs at least 2 frames");
  Tracker tracker(init, frames[0].width(), frames[0].height(), cfg);
  TrackResult result;
  result.boxes.push_back(init);
  result.provenance.push_back(Provenance::Anchored);
  const auto interval = static_cast<std::size_t>(cfg.interval);
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const std::size_t ref = t >= interval ? t - interval : 0;
    result.boxes.push_back(tracker.step(frames[ref], frames[t], t, observer));
    result.provenance.push_back(Provenance::Measured);
  }
  return result;
}

}  // namespace moft
