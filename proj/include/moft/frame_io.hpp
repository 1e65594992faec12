#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moft/types.hpp"

namespace moft {

/// Single-band intensity image with real values in [0, 255].
struct Frame {
  Grid<double> pixels;
  std::size_t index = 0;

  Frame() = default;
  /// Validates shape and range; throws ArgumentError on violation.
  explicit Frame(Grid<double> px, std::size_t idx = 0);

  int width() const { return static_cast<int>(pixels.cols()); }
  int height() const { return static_cast<int>(pixels.rows()); }
  double operator()(int x, int y) const { return pixels(y, x); }
};

/// Planar 8-bit RGB image. Used both for decoded colour frames and for
/// rendered flow fields.
struct RgbImage {
  Grid8 r, g, b;

  RgbImage() = default;
  RgbImage(int width, int height);

  int width() const { return static_cast<int>(r.cols()); }
  int height() const { return static_cast<int>(r.rows()); }

  const Grid8& band(int i) const { return i == 0 ? r : (i == 1 ? g : b); }
  Grid8& band(int i) { return i == 0 ? r : (i == 1 ? g : b); }
};

using ColorFrame = RgbImage;

using DecodedImage = std::variant<Frame, ColorFrame>;

struct CropRect {
  int x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

/// Numbered image sequence on disk: `<directory>/<prefix><index padded to digits><extension>`.
struct SequenceManifest {
  std::filesystem::path directory;
  std::string prefix = "img_";
  int digits = 6;
  std::string extension = ".pgm";
  int first_index = 0;
  int frame_count = 0;
  std::optional<CropRect> crop;

  std::filesystem::path frame_path(int i) const;
};

using GroundTruth = std::vector<BoundingBox>;

DecodedImage decode_image(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const Frame& f);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

Frame to_grayscale(const ColorFrame& c);
Frame crop(const Frame& f, const CropRect& rect);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Reads any P5/P6 file and reduces it to intensity.
Frame load_frame(const std::filesystem::path& path);

/// Key=value manifest. Recognised keys: dir, prefix, digits, ext, first, count, crop.
/// A relative `dir` is resolved against `base_dir`.
SequenceManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
SequenceManifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const SequenceManifest& m);

/// Loads every frame of the manifest, converting to intensity and applying the crop.
std::vector<Frame> load_sequence(const SequenceManifest& m);

GroundTruth parse_ground_truth(std::string_view text);
std::string format_ground_truth(const GroundTruth& gt);
/// Checks length against frame_count and constant extent.
void validate_ground_truth(const GroundTruth& gt, std::size_t frame_count);

std::size_t write_results(std::span<const BoundingBox> track, std::ostream& sink);
std::string format_results(std::span<const BoundingBox> track);
/// Inverse of write_results.
std::vector<BoundingBox> parse_results(std::string_view text);

/// Parses "x,y,w,h" (used for CLI flags).
BoundingBox parse_box(std::string_view text);

}  // namespace moft
