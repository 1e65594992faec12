#include "moft/optical_flow.hpp"

#include <bit>
#include <cstring>

#include <fmt/format.h>

namespace moft {

namespace {

static_assert(std::endian::native == std::endian::little, "flow dump assumes a little-endian host");

void append_plane(std::vector<std::uint8_t>& out, const Grid<double>& plane) {
  const auto offset = out.size();
  out.resize(offset + sizeof(double) * static_cast<std::size_t>(plane.size()));
  std::memcpy(out.data() + offset, plane.data(), sizeof(double) * static_cast<std::size_t>(plane.size()));
}

}  // namespace

std::vector<std::uint8_t> encode_flow_dump(const FlowField<double>& flow) {
  const auto header = fmt::format("MOFTFLOW1 {} {}\n", flow.width(), flow.height());
  std::vector<std::uint8_t> out(header.begin(), header.end());
  append_plane(out, flow.vx);
  append_plane(out, flow.vy);
  return out;
}

FlowField<double> decode_flow_dump(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const auto nl = text.find('\n');
  if (text.substr(0, 10) != "MOFTFLOW1 " || nl == std::string_view::npos) throw FormatError("bad flow dump header", 0);
  int w = 0, h = 0;
  if (std::sscanf(std::string(text.substr(10, nl - 10)).c_str(), "%d %d", &w, &h) != 2 || w < 1 || h < 1)
    throw FormatError("bad flow dump dimensions", 10);
  const std::size_t plane = sizeof(double) * static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - (nl + 1) != 2 * plane) throw FormatError("flow dump payload size mismatch", nl + 1);
  FlowField<double> flow;
  flow.vx.resize(h, w);
  flow.vy.resize(h, w);
  std::memcpy(flow.vx.data(), bytes.data() + nl + 1, plane);
  std::memcpy(flow.vy.data(), bytes.data() + nl + 1 + plane, plane);
  flow.singular = (flow.vx == 0.0) && (flow.vy == 0.0);
  return flow;
}

}  // namespace moft
