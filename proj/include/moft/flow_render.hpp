#pragma once

#include <array>
#include <cstdint>

#include "moft/frame_io.hpp"
#include "moft/optical_flow.hpp"

namespace moft {

enum class Normalization { PerFieldMax, Fixed };

struct HsvParams {
  Normalization normalization = Normalization::PerFieldMax;
  double vmax = 1.0;  // used when normalization == Fixed
  double epsilon = 1e-9;

  static HsvParams fixed(double vmax) { return {Normalization::Fixed, vmax, 1e-9}; }
  void validate() const;
};

struct Hsv {
  double hue;         // degrees, [0, 360)
  double saturation;  // [0, 1]
  double value;       // [0, 1]
};

using Rgb8 = std::array<std::uint8_t, 3>;

/// Hue is the flow direction, saturation the magnitude relative to vmax (capped at 1), value 1.
Hsv flow_to_hsv(double vx, double vy, double vmax);

/// Hexcone conversion, channels rounded to nearest. Throws ArgumentError outside the domain.
Rgb8 hsv_to_rgb(double hue, double saturation, double value);
inline Rgb8 hsv_to_rgb(const Hsv& c) { return hsv_to_rgb(c.hue, c.saturation, c.value); }

/// Zero flow renders white; faster pixels render with a strictly lower channel sum.
RgbImage render_flow(const FlowField<double>& field, const HsvParams& params = {});

}  // namespace moft
