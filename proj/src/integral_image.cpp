#include "moft/integral_image.hpp"

#include <fmt/format.h>

namespace moft {

IntegralImage build_integral(const RgbImage& img) {
  return {{build_band_integral(img.r), build_band_integral(img.g), build_band_integral(img.b)}};
}

BandSums box_sum(const IntegralImage& ii, const BoundingBox& box) {
  if (!box.inside(ii.width(), ii.height()))
    throw BoundsError(fmt::format("box {} outside {}x{} image", to_string(box), ii.width(), ii.height()));
  auto sum = [&](const Grid<std::int64_t>& t) {
    return t(box.bottom(), box.right()) + t(box.y, box.x) - t(box.y, box.right()) - t(box.bottom(), box.x);
  };
  return {sum(ii.bands[0]), sum(ii.bands[1]), sum(ii.bands[2])};
}

std::int64_t box_brightness(const IntegralImage& ii, const BoundingBox& box) { return box_sum(ii, box).total(); }

}  // namespace moft
