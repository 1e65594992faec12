#pragma once

#include <array>
#include <cstdint>

#include "moft/frame_io.hpp"
#include "moft/types.hpp"

namespace moft {

/// Per-band summed-area tables of an RgbImage.
///
/// Each table is (height + 1) x (width + 1): row 0 and column 0 are zero, and
/// entry (y + 1, x + 1) holds the sum of band values over [0, x] x [0, y].
struct IntegralImage {
  std::array<Grid<std::int64_t>, 3> bands;

  int width() const { return static_cast<int>(bands[0].cols()) - 1; }
  int height() const { return static_cast<int>(bands[0].rows()) - 1; }
};

struct BandSums {
  std::int64_t r = 0, g = 0, b = 0;
  std::int64_t total() const { return r + g + b; }
  friend bool operator==(const BandSums&, const BandSums&) = default;
};

/// Single pass per band over the cumulative row sum.
template <typename Derived>
Grid<std::int64_t> build_band_integral(const Eigen::ArrayBase<Derived>& band) {
  const auto h = band.rows(), w = band.cols();
  Grid<std::int64_t> table = Grid<std::int64_t>::Zero(h + 1, w + 1);
  for (Eigen::Index y = 0; y < h; ++y) {
    std::int64_t row_sum = 0;
    for (Eigen::Index x = 0; x < w; ++x) {
      row_sum += static_cast<std::int64_t>(band(y, x));
      table(y + 1, x + 1) = table(y, x + 1) + row_sum;
    }
  }
  return table;
}

IntegralImage build_integral(const RgbImage& img);

/// Four table reads per band. Throws BoundsError when the box leaves the image.
BandSums box_sum(const IntegralImage& ii, const BoundingBox& box);

/// Sum of the three band sums; the quantity minimised by the tracker.
std::int64_t box_brightness(const IntegralImage& ii, const BoundingBox& box);

}  // namespace moft
