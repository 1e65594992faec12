#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "moft/flow_render.hpp"
#include "moft/frame_io.hpp"
#include "moft/integral_image.hpp"
#include "moft/metrics.hpp"
#include "moft/optical_flow.hpp"
#include "moft/synth.hpp"
#include "moft/tracker.hpp"

namespace moft::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct PipelineFlags {
  int interval = 1;
  int radius = 5;
  int window_half = 7;
  double singular_threshold = 1e-6;
  bool normal_flow = false;
  double vmax = 0.0;  // > 0 selects fixed normalization

  void add_to(CLI::App& app) {
    app.add_option("-i,--interval", interval, "Frames between the compared pair")->capture_default_str();
    app.add_option("-r,--radius", radius, "Search radius in pixels")->capture_default_str();
    app.add_option("--window", window_half, "Flow window half-size n (window is 2n+1)")->capture_default_str();
    app.add_option("--singular-threshold", singular_threshold, "Minimum normal-matrix determinant")
        ->capture_default_str();
    app.add_flag("--normal-flow", normal_flow, "Solve degenerate windows along the gradient direction");
    app.add_option("--vmax", vmax, "Fixed flow magnitude for full saturation (default: per-field max)");
  }

  TrackConfig config() const {
    TrackConfig cfg;
    cfg.interval = interval;
    cfg.radius = radius;
    cfg.flow.window_half = window_half;
    cfg.flow.singular_threshold = singular_threshold;
    cfg.flow.aperture = normal_flow ? ApertureMode::NormalFlow : ApertureMode::Zero;
    if (vmax > 0.0) cfg.hsv = HsvParams::fixed(vmax);
    cfg.validate();
    return cfg;
  }
};

std::optional<CropRect> parse_crop(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto b = parse_box(text);
  return CropRect{b.x, b.y, b.w, b.h};
}

std::vector<Frame> load_frames(const std::string& manifest_path, const std::string& crop_flag) {
  auto manifest = load_manifest(manifest_path);
  if (auto c = parse_crop(crop_flag)) manifest.crop = c;
  return load_sequence(manifest);
}

void check_init(const BoundingBox& b, int width, int height) {
  if (b.x < 0) throw UsageError(fmt::format("init box x={} is left of the frame (x >= 0)", b.x));
  if (b.y < 0) throw UsageError(fmt::format("init box y={} is above the frame (y >= 0)", b.y));
  if (b.right() > width)
    throw UsageError(fmt::format("init box right edge x+w={} exceeds frame width {}", b.right(), width));
  if (b.bottom() > height)
    throw UsageError(fmt::format("init box bottom edge y+h={} exceeds frame height {}", b.bottom(), height));
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("--{}: '{}' is not an integer", what, item));
    }
    start = end + 1;
  }
  if (values.empty()) throw UsageError(fmt::format("--{} must list at least one value", what));
  return values;
}

std::string slurp(const std::string& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

// ---------------------------------------------------------------------------

struct TrackCmd {
  std::string frames, init, crop, gt, out, viz_dir;
  PipelineFlags pipeline;
  bool timing = false;
  int repeats = 1;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("track", "Track the initial box through a frame sequence");
    sub->add_option("--frames", frames, "Sequence manifest")->required();
    sub->add_option("--init", init, "Initial box x,y,w,h")->required();
    sub->add_option("--crop", crop, "Crop x,y,w,h applied to every frame");
    sub->add_option("--gt", gt, "Ground truth (unused by track)");
    sub->add_option("--out", out, "Results CSV (default: stdout)");
    sub->add_option("--viz-dir", viz_dir, "Write the rendered flow of every step as PPM");
    sub->add_flag("--timing", timing, "Report pipeline frames per second");
    sub->add_option("--repeats", repeats, "Timing repeats")->capture_default_str();
    pipeline.add_to(*sub);
  }

  int run(std::ostream& os) const {
    const auto cfg = pipeline.config();
    if (repeats < 1) throw UsageError("--repeats must be >= 1");
    const auto seq = load_frames(frames, crop);
    const auto box = parse_box(init);
    check_init(box, seq.front().width(), seq.front().height());

    StepObserver observer;
    if (!viz_dir.empty()) {
      fs::create_directories(viz_dir);
      observer = [this](std::size_t t, const RgbImage& img) {
        write_file(fs::path(viz_dir) / fmt::format("flow_{:06d}.ppm", t), encode_ppm(img));
      };
    }

    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const auto result = track_sequence(seq, box, cfg, observer);
    const std::chrono::duration<double> first = Clock::now() - t0;
    std::chrono::duration<double> total = first;
    for (int k = 1; k < repeats; ++k) {
      const auto tk = Clock::now();
      (void)track_sequence(seq, box, cfg);
      total += Clock::now() - tk;
    }

    write_output(out, format_results(result.boxes), os);
    if (timing) {
      const double steps = static_cast<double>(seq.size() - 1);
      os << fmt::format("timing: frames={} repeats={} fps_run={:.2f} fps_mean={:.2f}\n", seq.size(), repeats,
                        steps / first.count(), steps * repeats / total.count());
    }
    return kOk;
  }
};

struct EvalCmd {
  std::string results, gt, out_prefix;
  bool svg = false;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("eval", "Score a results CSV against ground truth");
    sub->add_option("--results", results, "Results CSV written by track")->required();
    sub->add_option("--gt", gt, "Ground truth file")->required();
    sub->add_option("--out", out_prefix, "Prefix for success.csv / precision.csv");
    sub->add_flag("--svg", svg, "Also write success.svg / precision.svg next to the CSVs");
  }

  int run(std::ostream& os) const {
    const auto tracked = parse_results(slurp(results));
    const auto truth = parse_ground_truth(slurp(gt));
    if (tracked.size() != truth.size())
      throw UsageError(fmt::format("results have {} frames, ground truth has {}", tracked.size(), truth.size()));
    if (tracked.size() < 2) throw UsageError("evaluation needs at least 2 frames");
    const auto samples = score(tracked, truth);
    const auto success = success_curve(samples);
    const auto precision = precision_curve(samples);
    if (!out_prefix.empty()) {
      write_text_file(out_prefix + "success.csv", format_curve(success));
      write_text_file(out_prefix + "precision.csv", format_curve(precision));
      if (svg) {
        write_text_file(out_prefix + "success.svg", curve_svg(success));
        write_text_file(out_prefix + "precision.svg", curve_svg(precision));
      }
    }
    os << fmt::format("success_auc={} precision_auc={}\n", success.auc, precision.auc);
    return kOk;
  }
};

struct SweepCmd {
  std::string frames, init, crop, gt, out, intervals, radii;
  PipelineFlags pipeline;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("sweep", "Success AUC over a grid of intervals and radii");
    sub->add_option("--frames", frames, "Sequence manifest")->required();
    sub->add_option("--gt", gt, "Ground truth file")->required();
    sub->add_option("--init", init, "Initial box x,y,w,h (default: first ground-truth box)");
    sub->add_option("--crop", crop, "Crop x,y,w,h applied to every frame");
    sub->add_option("--intervals", intervals, "Comma-separated intervals")->required();
    sub->add_option("--radii", radii, "Comma-separated radii")->required();
    sub->add_option("--out", out, "Sweep CSV (default: stdout)");
    pipeline.add_to(*sub);
  }

  int run(std::ostream& os) const {
    const auto is = parse_int_list(intervals, "intervals");
    const auto rs = parse_int_list(radii, "radii");
    for (int v : is)
      if (v < 1) throw UsageError("intervals must be >= 1");
    for (int v : rs)
      if (v < 1) throw UsageError("radii must be >= 1");
    const auto base = pipeline.config();
    const auto seq = load_frames(frames, crop);
    const auto truth = parse_ground_truth(slurp(gt));
    validate_ground_truth(truth, seq.size());
    const auto box = init.empty() ? truth.front() : parse_box(init);
    check_init(box, seq.front().width(), seq.front().height());
    write_output(out, format_sweep(sweep(seq, box, truth, is, rs, base)), os);
    return kOk;
  }
};

struct SynthCmd {
  std::string spec, out_dir;
  std::optional<std::uint64_t> seed;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("synth", "Generate a synthetic sequence with ground truth");
    sub->add_option("--spec", spec, "Scene spec (key=value)")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Override the scene seed");
  }

  int run(std::ostream& os) const {
    const auto scene_spec = load_scene_spec(spec);
    const auto scene = generate(scene_spec, seed.value_or(scene_spec.seed));
    write_scene(scene, out_dir);
    os << fmt::format("wrote {} frames to {}\n", scene.frames.size(), (fs::path(out_dir) / "sequence.txt").string());
    return kOk;
  }
};

struct FlowvizCmd {
  std::string frames, crop, out, dump;
  int from = 0;
  int interval = 1;
  std::optional<int> to;
  PipelineFlags pipeline;

  void add(CLI::App& app) {
    auto* sub = app.add_subcommand("flowviz", "Render the flow between two frames as a PPM");
    sub->add_option("--frames", frames, "Sequence manifest")->required();
    sub->add_option("--crop", crop, "Crop x,y,w,h applied to every frame");
    sub->add_option("--from", from, "Reference frame index")->capture_default_str();
    sub->add_option("--to", to, "Second frame index (default: from + interval)");
    sub->add_option("--out", out, "Output PPM")->required();
    sub->add_option("--dump-flow", dump, "Also write the raw flow field");
    sub->add_option("-i,--interval", interval, "Frames between the pair")->capture_default_str();
    sub->add_option("--window", pipeline.window_half, "Flow window half-size")->capture_default_str();
    sub->add_option("--singular-threshold", pipeline.singular_threshold, "Minimum normal-matrix determinant");
    sub->add_flag("--normal-flow", pipeline.normal_flow, "Solve degenerate windows along the gradient");
    sub->add_option("--vmax", pipeline.vmax, "Fixed flow magnitude for full saturation");
  }

  int run(std::ostream& os) const {
    auto cfg = pipeline.config();
    const auto seq = load_frames(frames, crop);
    const int n = static_cast<int>(seq.size());
    const int second = to.value_or(from + interval);
    if (from < 0 || from >= n) throw UsageError(fmt::format("--from {} outside [0, {})", from, n));
    if (second < 0 || second >= n) throw UsageError(fmt::format("second frame {} outside [0, {})", second, n));
    const auto flow = dense_flow(seq[static_cast<std::size_t>(from)], seq[static_cast<std::size_t>(second)], cfg.flow);
    const auto img = render_flow(flow, cfg.hsv);
    write_file(out, encode_ppm(img));
    if (!dump.empty()) write_file(dump, encode_flow_dump(flow));
    const auto white = ((img.r == 255) && (img.g == 255) && (img.b == 255)).count();
    os << fmt::format("frames {}->{}: {} of {} pixels non-white\n", from, second, img.r.size() - white, img.r.size());
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-frame optical flow tracker", "moft"};
  app.set_version_flag("--version", std::string("moft ") + MOFT_VERSION);
  app.require_subcommand(1);

  TrackCmd track;
  EvalCmd eval;
  SweepCmd sweep_cmd;
  SynthCmd synth;
  FlowvizCmd flowviz;
  track.add(app);
  eval.add(app);
  sweep_cmd.add(app);
  synth.add(app);
  flowviz.add(app);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (app.got_subcommand("track")) return track.run(out);
    if (app.got_subcommand("eval")) return eval.run(out);
    if (app.got_subcommand("sweep")) return sweep_cmd.run(out);
    if (app.got_subcommand("synth")) return synth.run(out);
    if (app.got_subcommand("flowviz")) return flowviz.run(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}

}  // namespace moft::cli
