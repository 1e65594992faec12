#include "moft/frame_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace moft {

std::string to_string(const BoundingBox& b) { return fmt::format("({},{},{},{})", b.x, b.y, b.w, b.h); }

Frame::Frame(Grid<double> px, std::size_t idx) : pixels(std::move(px)), index(idx) {
  if (pixels.rows() < 1 || pixels.cols() < 1) throw ArgumentError("frame must be at least 1x1");
  if (!pixels.allFinite() || (pixels < 0.0).any() || (pixels > 255.0).any())
    throw ArgumentError("frame intensities must be finite and within [0, 255]");
}

RgbImage::RgbImage(int width, int height)
    : r(Grid8::Zero(height, width)), g(Grid8::Zero(height, width)), b(Grid8::Zero(height, width)) {}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) throw FormatError(fmt::format("{} too large", what), start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(fmt::format("expected {}", what), start);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
      throw FormatError("expected whitespace before raster", pos_);
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  static bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    parts.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return parts;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto p = text.find('\n', start);
    const auto end = p == std::string_view::npos ? text.size() : p;
    ++line_no;
    fn(text.substr(start, end - start), line_no);
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
}

BoundingBox parse_box_fields(const std::vector<std::string>& fields, std::size_t line) {
  if (fields.size() != 4) throw ParseError(fmt::format("expected 4 fields, got {}", fields.size()), line);
  int v[4];
  for (int i = 0; i < 4; ++i)
    if (!parse_int(fields[i], v[i])) throw ParseError(fmt::format("field {} is not an integer: '{}'", i + 1, fields[i]), line);
  if (v[2] <= 0 || v[3] <= 0) throw ParseError("box width and height must be positive", line);
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw FormatError("bad magic number (expected P5 or P6)", 0);
  const bool color = bytes[1] == '6';
  HeaderReader rd(bytes);
  rd.advance(2);
  const long width = rd.read_uint("width");
  const long height = rd.read_uint("height");
  const std::size_t maxval_pos = rd.pos();
  const long maxval = rd.read_uint("maxval");
  if (width < 1 || height < 1) throw FormatError("image dimensions must be positive", maxval_pos);
  if (maxval != 255) throw FormatError(fmt::format("unsupported maxval {}", maxval), maxval_pos);
  rd.expect_single_space();

  const std::size_t channels = color ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  const std::size_t have = bytes.size() - rd.pos();
  if (have < need)
    throw FormatError(fmt::format("truncated payload: need {} bytes, have {}", need, have), bytes.size());

  const auto* data = bytes.data() + rd.pos();
  const int w = static_cast<int>(width), h = static_cast<int>(height);
  if (!color) {
    Eigen::Map<const Grid8> raster(data, h, w);
    return Frame(raster.cast<double>());
  }
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const auto* p = data + 3 * (static_cast<std::size_t>(y) * w + x);
      img.r(y, x) = p[0];
      img.g(y, x) = p[1];
      img.b(y, x) = p[2];
    }
  return img;
}

std::vector<std::uint8_t> encode_pgm(const Frame& f) {
  const std::string header = fmt::format("P5\n{} {}\n255\n", f.width(), f.height());
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + f.pixels.size());
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x)
      out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(f(x, y), 0.0, 255.0))));
  return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  const std::string header = fmt::format("P6\n{} {}\n255\n", img.width(), img.height());
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + 3 * static_cast<std::size_t>(img.r.size()));
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      out.push_back(img.r(y, x));
      out.push_back(img.g(y, x));
      out.push_back(img.b(y, x));
    }
  return out;
}

Frame to_grayscale(const ColorFrame& c) {
  Grid<double> luma = 0.299 * c.r.cast<double>() + 0.587 * c.g.cast<double>() + 0.114 * c.b.cast<double>();
  // Gray input must map to itself exactly; the weighted sum can be off by an ulp.
  const auto gray = (c.r == c.g) && (c.g == c.b);
  luma = gray.select(c.r.cast<double>(), luma).min(255.0);
  return Frame(std::move(luma));
}

Frame crop(const Frame& f, const CropRect& rect) {
  if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 || rect.x + rect.w > f.width() ||
      rect.y + rect.h > f.height())
    throw BoundsError(fmt::format("crop ({},{},{},{}) exceeds {}x{} frame", rect.x, rect.y, rect.w, rect.h,
                                  f.width(), f.height()));
  return Frame(f.pixels.block(rect.y, rect.x, rect.h, rect.w), f.index);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

Frame load_frame(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  auto decoded = decode_image(bytes);
  if (auto* f = std::get_if<Frame>(&decoded)) return std::move(*f);
  return to_grayscale(std::get<ColorFrame>(decoded));
}

std::filesystem::path SequenceManifest::frame_path(int i) const {
  return directory / fmt::format("{}{:0{}d}{}", prefix, first_index + i, digits, extension);
}

SequenceManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  SequenceManifest m;
  m.directory = base_dir;
  bool have_count = false;
  for_each_line(text, [&](std::string_view raw, std::size_t line) {
    const auto s = trim(raw);
    if (s.empty() || s[0] == '#') return;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line);
    const auto key = trim(std::string_view(s).substr(0, eq));
    const auto value = trim(std::string_view(s).substr(eq + 1));
    auto int_value = [&] {
      int v = 0;
      if (!parse_int(value, v)) throw ParseError(fmt::format("'{}' expects an integer", key), line);
      return v;
    };
    if (key == "dir") {
      const std::filesystem::path p(value);
      m.directory = p.is_absolute() ? p : base_dir / p;
    } else if (key == "prefix") {
      m.prefix = value;
    } else if (key == "digits") {
      m.digits = int_value();
    } else if (key == "ext") {
      m.extension = value;
    } else if (key == "first") {
      m.first_index = int_value();
    } else if (key == "count") {
      m.frame_count = int_value();
      have_count = true;
    } else if (key == "crop") {
      const auto b = parse_box_fields(split(value, ','), line);
      m.crop = CropRect{b.x, b.y, b.w, b.h};
    } else {
      throw ParseError(fmt::format("unknown manifest key '{}'", key), line);
    }
  });
  if (!have_count) throw ParseError("manifest lacks 'count'", 0);
  if (m.frame_count < 2) throw ParseError("manifest frame count must be at least 2", 0);
  if (m.digits < 0 || m.first_index < 0) throw ParseError("digits and first must be non-negative", 0);
  return m;
}

SequenceManifest load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_manifest({reinterpret_cast<const char*>(bytes.data()), bytes.size()}, path.parent_path());
}

std::string format_manifest(const SequenceManifest& m) {
  std::string out = fmt::format("dir={}\nprefix={}\ndigits={}\next={}\nfirst={}\ncount={}\n", m.directory.string(),
                                m.prefix, m.digits, m.extension, m.first_index, m.frame_count);
  if (m.crop) out += fmt::format("crop={},{},{},{}\n", m.crop->x, m.crop->y, m.crop->w, m.crop->h);
  return out;
}

std::vector<Frame> load_sequence(const SequenceManifest& m) {
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(m.frame_count));
  int native_w = 0, native_h = 0;
  for (int i = 0; i < m.frame_count; ++i) {
    Frame f = load_frame(m.frame_path(i));
    if (i == 0) {
      native_w = f.width();
      native_h = f.height();
    } else if (f.width() != native_w || f.height() != native_h)
      throw ShapeError("frame " + m.frame_path(i).string() + " differs in size from the first frame");
    if (m.crop) f = crop(f, *m.crop);
    f.index = static_cast<std::size_t>(i);
    frames.push_back(std::move(f));
  }
  return frames;
}

GroundTruth parse_ground_truth(std::string_view text) {
  GroundTruth gt;
  for_each_line(text, [&](std::string_view raw, std::size_t line) {
    const auto s = trim(raw);
    if (s.empty()) return;
    gt.push_back(parse_box_fields(split(s, ','), line));
  });
  return gt;
}

std::string format_ground_truth(const GroundTruth& gt) {
  std::string out;
  for (const auto& b : gt) out += fmt::format("{},{},{},{}\n", b.x, b.y, b.w, b.h);
  return out;
}

void validate_ground_truth(const GroundTruth& gt, std::size_t frame_count) {
  if (gt.size() != frame_count)
    throw ArgumentError(fmt::format("ground truth has {} boxes for {} frames", gt.size(), frame_count));
  for (std::size_t i = 1; i < gt.size(); ++i)
    if (gt[i].w != gt[0].w || gt[i].h != gt[0].h)
      throw ArgumentError(fmt::format("ground truth box {} changes extent", i));
}

std::string format_results(std::span<const BoundingBox> track) {
  std::string out = "frame,x,y,w,h\n";
  for (std::size_t i = 0; i < track.size(); ++i)
    out += fmt::format("{},{},{},{},{}\n", i, track[i].x, track[i].y, track[i].w, track[i].h);
  return out;
}

std::size_t write_results(std::span<const BoundingBox> track, std::ostream& sink) {
  const auto text = format_results(track);
  sink.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!sink) throw IoError("results sink write failed");
  return text.size();
}

std::vector<BoundingBox> parse_results(std::string_view text) {
  std::vector<BoundingBox> boxes;
  bool header_seen = false;
  for_each_line(text, [&](std::string_view raw, std::size_t line) {
    const auto s = trim(raw);
    if (s.empty()) return;
    if (!header_seen) {
      if (s != "frame,x,y,w,h") throw ParseError("expected header 'frame,x,y,w,h'", line);
      header_seen = true;
      return;
    }
    auto fields = split(s, ',');
    if (fields.size() != 5) throw ParseError(fmt::format("expected 5 fields, got {}", fields.size()), line);
    int frame = 0;
    if (!parse_int(fields[0], frame) || frame != static_cast<int>(boxes.size()))
      throw ParseError("frame column must count up from 0", line);
    fields.erase(fields.begin());
    boxes.push_back(parse_box_fields(fields, line));
  });
  if (!header_seen) throw ParseError("empty results file", 1);
  return boxes;
}

BoundingBox parse_box(std::string_view text) { return parse_box_fields(split(text, ','), 1); }

}  // namespace moft
