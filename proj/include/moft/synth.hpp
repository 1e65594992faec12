#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "moft/frame_io.hpp"

namespace moft {

/// SplitMix64 (Steele, Lea, Flood 2014). Fixed so that scenes reproduce bitwise on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent stream `id` derived from a scene seed.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t id) {
    SplitMix64 mix(seed ^ (id * 0xD1B54A32D192ED03ULL));
    return SplitMix64(mix.next());
  }

 private:
  std::uint64_t state_;
};

enum class BackgroundKind { Texture, Flat };

struct SceneSpec {
  int width = 256;
  int height = 256;
  int frames = 100;

  BackgroundKind background = BackgroundKind::Texture;
  double level = 128.0;    // background mean (texture) or constant (flat)
  double contrast = 80.0;  // texture peak-to-peak range
  int smoothing = 2;       // box-blur radius, applied three times

  int target_w = 20;
  int target_h = 10;
  double target_x = 40.0;  // top-left at frame 0
  double target_y = 120.0;
  double velocity_x = 1.0;  // px/frame
  double velocity_y = 0.0;
  double target_offset = -80.0;  // target mean intensity relative to `level`
  double target_contrast = 60.0;  // peak-to-peak range of the texture carried by the target; 0 = flat
  int target_smoothing = 1;
  double target_isotropy = 1.0;  // 1 = isotropic noise, 0 = pattern varying only along x (like train cars)
  double softness = 1.0;         // 0 = hard edges at the rounded position, 1 = exact area coverage

  double noise = 0.0;  // per-pixel uniform noise in [-noise, noise]
  double drift = 0.0;  // frame t adds drift * t * x / (width - 1)

  std::uint64_t seed = 1;

  void validate() const;
};

struct Scene {
  std::vector<Frame> frames;
  GroundTruth truth;
};

/// Flat key=value text; keys are the SceneSpec field names, `background` is `texture` or `flat`.
SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::filesystem::path& path);

/// Frames are quantized to integer intensities so they survive a PGM round trip unchanged.
/// Stream 0 drives the background; stream t + 1 drives the noise of frame t.
Scene generate(const SceneSpec& spec, std::uint64_t seed);
inline Scene generate(const SceneSpec& spec) { return generate(spec, spec.seed); }

/// Rounds half up, as used for ground-truth boxes.
inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

/// Writes img_NNNNNN.pgm, groundtruth.txt and sequence.txt (a manifest) into `dir`.
SequenceManifest write_scene(const Scene& scene, const std::filesystem::path& dir);

}  // namespace moft
