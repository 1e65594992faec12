#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "moft/frame_io.hpp"
#include "moft/synth.hpp"

namespace moft::test {

inline std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("moft_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Grid<double> random_grid(int w, int h, std::mt19937& rng, int lo = 0, int hi = 255) {
  std::uniform_int_distribution<int> d(lo, hi);
  Grid<double> g(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g(y, x) = d(rng);
  return g;
}

inline RgbImage random_rgb(int w, int h, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(0, 255);
  RgbImage img(w, h);
  for (int b = 0; b < 3; ++b)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) img.band(b)(y, x) = static_cast<std::uint8_t>(d(rng));
  return img;
}

/// Periodic smoothed-noise texture in [0, 255]: uniform noise, three circular box blurs of radius r.
inline Grid<double> texture(int w, int h, std::uint64_t seed, int r = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Grid<double> g(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g(y, x) = d(rng);
  for (int pass = 0; pass < 3; ++pass) {
    Grid<double> t = Grid<double>::Zero(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int k = -r; k <= r; ++k) t(y, x) += g(y, ((x + k) % w + w) % w);
    g.setZero();
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int k = -r; k <= r; ++k) g(y, x) += t(((y + k) % h + h) % h, x);
  }
  return (g - g.minCoeff()) * (200.0 / (g.maxCoeff() - g.minCoeff())) + 20.0;
}

/// Circular translation: out(y, x) = g(y - dy, x - dx).
inline Grid<double> roll(const Grid<double>& g, int dx, int dy) {
  const int h = static_cast<int>(g.rows()), w = static_cast<int>(g.cols());
  Grid<double> out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(y, x) = g(((y - dy) % h + h) % h, ((x - dx) % w + w) % w);
  return out;
}

/// 256x256, 20x10 dark target with a column texture, 1 px/frame. Tracked with window_half = 1.
inline SceneSpec fast_scene(std::uint64_t seed = 1) {
  SceneSpec s;
  s.width = 256;
  s.height = 256;
  s.frames = 100;
  s.contrast = 80;
  s.smoothing = 1;
  s.target_w = 20;
  s.target_h = 10;
  s.target_x = 40;
  s.target_y = 120;
  s.velocity_x = 1.0;
  s.target_offset = -20;
  s.target_contrast = 80;
  s.target_smoothing = 1;
  s.target_isotropy = 0.1;
  s.noise = 2;
  s.seed = seed;
  return s;
}

constexpr int kSceneWindowHalf = 1;

}  // namespace moft::test
