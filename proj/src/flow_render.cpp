#include "moft/flow_render.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace moft {

void HsvParams::validate() const {
  if (normalization == Normalization::Fixed && !(vmax > 0.0)) throw ArgumentError("fixed vmax must be > 0");
  if (!(epsilon > 0.0)) throw ArgumentError("normalizer epsilon must be > 0");
}

Hsv flow_to_hsv(double vx, double vy, double vmax) {
  if (!(vmax > 0.0)) throw ArgumentError("vmax must be > 0");
  const double mag = std::hypot(vx, vy);
  double hue = 0.0;
  if (mag > 0.0) {
    hue = std::atan2(vy, vx) * (180.0 / std::numbers::pi);
    if (hue < 0.0) hue += 360.0;
    if (hue >= 360.0) hue = 0.0;
  }
  return {hue, std::min(mag / vmax, 1.0), 1.0};
}

Rgb8 hsv_to_rgb(double hue, double saturation, double value) {
  if (!(hue >= 0.0 && hue < 360.0) || !(saturation >= 0.0 && saturation <= 1.0) || !(value >= 0.0 && value <= 1.0))
    throw ArgumentError(fmt::format("hsv ({}, {}, {}) outside [0,360) x [0,1] x [0,1]", hue, saturation, value));
  const double chroma = value * saturation;
  const double sector = hue / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(sector, 2.0) - 1.0));
  const double m = value - chroma;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(sector)) {
    case 0: r = chroma, g = x; break;
    case 1: r = x, g = chroma; break;
    case 2: g = chroma, b = x; break;
    case 3: g = x, b = chroma; break;
    case 4: r = x, b = chroma; break;
    default: r = chroma, b = x; break;
  }
  auto to8 = [](double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

RgbImage render_flow(const FlowField<double>& field, const HsvParams& params) {
  params.validate();
  const double vmax = params.normalization == Normalization::Fixed
                          ? params.vmax
                          : std::max(field.vx.size() ? field.magnitude().maxCoeff() : 0.0, params.epsilon);
  RgbImage img(field.width(), field.height());
  for (int y = 0; y < field.height(); ++y)
    for (int x = 0; x < field.width(); ++x) {
      const auto c = hsv_to_rgb(flow_to_hsv(field.vx(y, x), field.vy(y, x), vmax));
      img.r(y, x) = c[0];
      img.g(y, x) = c[1];
      img.b(y, x) = c[2];
    }
  return img;
}

}  // namespace moft
