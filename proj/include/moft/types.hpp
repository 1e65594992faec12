#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace moft {

/// Row-major dense grid indexed as (row = y, col = x).
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Grid8 = Grid<std::uint8_t>;

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Axis-aligned box: top-left corner plus extent, x rightward, y downward.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }
  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }

  BoundingBox shifted(int dx, int dy) const { return {x + dx, y + dy, w, h}; }
  bool inside(int width, int height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && right() <= width && bottom() <= height;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

std::string to_string(const BoundingBox& b);

// Error hierarchy. Every failure reported by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : Error {
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;
};
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};
struct BoundsError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct GeometryError : Error {
  using Error::Error;
};
struct ArgumentError : Error {
  using Error::Error;
};
struct SpecError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace moft
