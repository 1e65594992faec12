#include "moft/synth.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include <fmt/format.h>

namespace moft {

namespace {

// Clamped box blur of radius r along rows, then along columns.
Grid<double> box_blur(const Grid<double>& src, int r) {
  const int h = static_cast<int>(src.rows()), w = static_cast<int>(src.cols());
  Grid<double> tmp(h, w), out(h, w);
  const double norm = 1.0 / (2 * r + 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int k = -r; k <= r; ++k) s += src(y, std::clamp(x + k, 0, w - 1));
      tmp(y, x) = s * norm;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int k = -r; k <= r; ++k) s += tmp(std::clamp(y + k, 0, h - 1), x);
      out(y, x) = s * norm;
    }
  return out;
}

// Smoothed uniform noise stretched to [mean - contrast / 2, mean + contrast / 2].
Grid<double> make_texture(int w, int h, int smoothing, double mean, double contrast, SplitMix64 rng) {
  Grid<double> tex(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) tex(y, x) = rng.uniform();
  if (smoothing > 0)
    for (int pass = 0; pass < 3; ++pass) tex = box_blur(tex, smoothing);
  const double lo = tex.minCoeff(), hi = tex.maxCoeff();
  const double scale = hi > lo ? contrast / (hi - lo) : 0.0;
  return (tex - lo) * scale + (mean - contrast / 2.0);
}

Grid<double> make_background(const SceneSpec& spec, std::uint64_t seed) {
  if (spec.background == BackgroundKind::Flat) return Grid<double>::Constant(spec.height, spec.width, spec.level);
  return make_texture(spec.width, spec.height, spec.smoothing, spec.level, spec.contrast, SplitMix64::stream(seed, 0));
}

// Bilinear lookup with clamped borders.
double sample(const Grid<double>& g, double u, double v) {
  const int w = static_cast<int>(g.cols()), h = static_cast<int>(g.rows());
  u = std::clamp(u, 0.0, w - 1.0);
  v = std::clamp(v, 0.0, h - 1.0);
  const int x0 = static_cast<int>(u), y0 = static_cast<int>(v);
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fu = u - x0, fv = v - y0;
  const double top = g(y0, x0) * (1 - fu) + g(y0, x1) * fu;
  const double bottom = g(y1, x0) * (1 - fu) + g(y1, x1) * fu;
  return top * (1 - fv) + bottom * fv;
}

// Length of [a, a + 1) ∩ [lo, hi).
double overlap_1d(double a, double lo, double hi) { return std::clamp(std::min(a + 1.0, hi) - std::max(a, lo), 0.0, 1.0); }

BoundingBox target_box(const SceneSpec& spec, int t) {
  return {round_half_up(spec.target_x + spec.velocity_x * t), round_half_up(spec.target_y + spec.velocity_y * t),
          spec.target_w, spec.target_h};
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  return std::string(s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1));
}

}  // namespace

void SceneSpec::validate() const {
  if (width < 1 || height < 1) throw SpecError("scene dimensions must be positive");
  if (frames < 1) throw SpecError("scene needs at least one frame");
  if (target_w < 1 || target_h < 1) throw SpecError("target extent must be positive");
  if (smoothing < 0) throw SpecError("smoothing radius must be >= 0");
  if (!(contrast >= 0.0) || !(noise >= 0.0)) throw SpecError("contrast and noise must be >= 0");
  if (!(softness >= 0.0 && softness <= 1.0)) throw SpecError("softness must lie in [0, 1]");
  const double target_level = level + target_offset;
  if (!(target_isotropy >= 0.0 && target_isotropy <= 1.0)) throw SpecError("target_isotropy must lie in [0, 1]");
  if (!(target_contrast >= 0.0) || target_smoothing < 0) throw SpecError("target texture parameters must be >= 0");
  if (!(target_level - target_contrast / 2.0 >= 0.0 && target_level + target_contrast / 2.0 <= 255.0))
    throw SpecError("target intensity range outside [0, 255]");
  for (int t = 0; t < frames; ++t) {
    const double x = target_x + velocity_x * t, y = target_y + velocity_y * t;
    const auto box = target_box(*this, t);
    if (x < 0.0 || y < 0.0 || x + target_w > width || y + target_h > height || !box.inside(width, height))
      throw SpecError(fmt::format("target leaves the {}x{} frame at frame {} (position {:.3f},{:.3f})", width, height,
                                  t, x, y));
  }
}

SceneSpec parse_scene_spec(std::string_view text) {
  SceneSpec spec;
  std::size_t line = 0, start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line;
    const auto s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line);
    const auto key = trim(std::string_view(s).substr(0, eq));
    const auto value = trim(std::string_view(s).substr(eq + 1));

    if (key == "background") {
      if (value == "texture") spec.background = BackgroundKind::Texture;
      else if (value == "flat") spec.background = BackgroundKind::Flat;
      else throw ParseError("background must be 'texture' or 'flat'", line);
      continue;
    }
    if (key == "seed") {
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), spec.seed);
      if (ec != std::errc() || ptr != value.data() + value.size()) throw ParseError("seed must be an unsigned integer", line);
      continue;
    }
    double v = 0;
    if (!parse_double(value, v)) throw ParseError(fmt::format("'{}' expects a number", key), line);
    auto as_int = [&] {
      if (v != std::floor(v)) throw ParseError(fmt::format("'{}' expects an integer", key), line);
      return static_cast<int>(v);
    };
    if (key == "width") spec.width = as_int();
    else if (key == "height") spec.height = as_int();
    else if (key == "frames") spec.frames = as_int();
    else if (key == "level") spec.level = v;
    else if (key == "contrast") spec.contrast = v;
    else if (key == "smoothing") spec.smoothing = as_int();
    else if (key == "target_w") spec.target_w = as_int();
    else if (key == "target_h") spec.target_h = as_int();
    else if (key == "target_x") spec.target_x = v;
    else if (key == "target_y") spec.target_y = v;
    else if (key == "velocity_x") spec.velocity_x = v;
    else if (key == "velocity_y") spec.velocity_y = v;
    else if (key == "target_offset") spec.target_offset = v;
    else if (key == "target_contrast") spec.target_contrast = v;
    else if (key == "target_smoothing") spec.target_smoothing = as_int();
    else if (key == "target_isotropy") spec.target_isotropy = v;
    else if (key == "softness") spec.softness = v;
    else if (key == "noise") spec.noise = v;
    else if (key == "drift") spec.drift = v;
    else throw ParseError(fmt::format("unknown scene key '{}'", key), line);
  }
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_scene_spec({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

Scene generate(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Grid<double> background = make_background(spec, seed);
  // Stream 1 << 32 is reserved for the texture the target carries with it.
  Grid<double> target_tex = make_texture(spec.target_w, spec.target_h, spec.target_smoothing,
                                         spec.level + spec.target_offset, spec.target_contrast,
                                         SplitMix64::stream(seed, 1ULL << 32));
  if (spec.target_isotropy < 1.0) {
    // Column pattern: the texture averaged down each column, stretched back to full contrast.
    const Eigen::Array<double, 1, Eigen::Dynamic> col = target_tex.colwise().mean();
    const double lo = col.minCoeff(), hi = col.maxCoeff();
    const double scale = hi > lo ? spec.target_contrast / (hi - lo) : 0.0;
    const Grid<double> columns =
        ((col - lo) * scale + (spec.level + spec.target_offset - spec.target_contrast / 2.0)).replicate(spec.target_h, 1);
    target_tex = (1.0 - spec.target_isotropy) * columns + spec.target_isotropy * target_tex;
  }
  const int w = spec.width, h = spec.height;

  Scene scene;
  scene.frames.reserve(static_cast<std::size_t>(spec.frames));
  for (int t = 0; t < spec.frames; ++t) {
    const double tx = spec.target_x + spec.velocity_x * t, ty = spec.target_y + spec.velocity_y * t;
    const BoundingBox hard = target_box(spec, t);
    scene.truth.push_back(hard);

    Grid<double> img = background;
    // Only pixels touching the target footprint change.
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(tx, double(hard.x))))),
              y0 = std::max(0, static_cast<int>(std::floor(std::min(ty, double(hard.y))))),
              x1 = std::min(w, static_cast<int>(std::ceil(std::max(tx, double(hard.x)) + spec.target_w))),
              y1 = std::min(h, static_cast<int>(std::ceil(std::max(ty, double(hard.y)) + spec.target_h)));
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) {
        const double soft = overlap_1d(x, tx, tx + spec.target_w) * overlap_1d(y, ty, ty + spec.target_h);
        const double crisp = (x >= hard.x && x < hard.right() && y >= hard.y && y < hard.bottom()) ? 1.0 : 0.0;
        const double c = (1.0 - spec.softness) * crisp + spec.softness * soft;
        if (c > 0.0) img(y, x) = img(y, x) * (1.0 - c) + sample(target_tex, x - tx, y - ty) * c;
      }

    if (spec.drift != 0.0 && w > 1)
      for (int x = 0; x < w; ++x) img.col(x) += spec.drift * t * x / (w - 1);
    if (spec.noise > 0.0) {
      auto rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t) + 1);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img(y, x) += spec.noise * (2.0 * rng.uniform() - 1.0);
    }
    img = img.round().max(0.0).min(255.0);
    scene.frames.emplace_back(std::move(img), static_cast<std::size_t>(t));
  }
  return scene;
}

SequenceManifest write_scene(const Scene& scene, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SequenceManifest m;
  m.directory = dir;
  m.frame_count = static_cast<int>(scene.frames.size());
  for (int i = 0; i < m.frame_count; ++i) write_file(m.frame_path(i), encode_pgm(scene.frames[static_cast<std::size_t>(i)]));
  write_text_file(dir / "groundtruth.txt", format_ground_truth(scene.truth));
  SequenceManifest relative = m;
  relative.directory = ".";
  write_text_file(dir / "sequence.txt", format_manifest(relative));
  return m;
}

}  // namespace moft
