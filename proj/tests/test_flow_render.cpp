#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "moft/flow_render.hpp"

using namespace moft;

namespace {

int channel_sum(const Rgb8& c) { return c[0] + c[1] + c[2]; }

FlowField<double> field(int w, int h) {
  return {Grid<double>::Zero(h, w), Grid<double>::Zero(h, w), Grid<bool>::Constant(h, w, true)};
}

}  // namespace

TEST_CASE("flow_to_hsv examples") {
  const auto zero = flow_to_hsv(0, 0, 2.0);
  CHECK(zero.hue == 0.0);
  CHECK(zero.saturation == 0.0);
  CHECK(zero.value == 1.0);

  const auto right = flow_to_hsv(2.0, 0, 2.0);
  CHECK(right.hue == 0.0);
  CHECK(right.saturation == 1.0);
  CHECK(right.value == 1.0);

  const auto down = flow_to_hsv(0, 1.0, 2.0);
  CHECK(down.hue == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(down.saturation == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(flow_to_hsv(-1, 0, 1).hue == doctest::Approx(180.0));
  CHECK(flow_to_hsv(0, -1, 1).hue == doctest::Approx(270.0));
  CHECK(flow_to_hsv(1, -1e-300, 1).hue < 360.0);
  CHECK(flow_to_hsv(10, 0, 1).saturation == 1.0);
  CHECK_THROWS_AS(flow_to_hsv(1, 0, 0), ArgumentError);
}

TEST_CASE("hsv_to_rgb examples") {
  for (double h : {0.0, 77.0, 359.9}) CHECK(hsv_to_rgb(h, 0, 1) == Rgb8{255, 255, 255});
  CHECK(hsv_to_rgb(0, 1, 1) == Rgb8{255, 0, 0});
  CHECK(hsv_to_rgb(120, 1, 1) == Rgb8{0, 255, 0});
  CHECK(hsv_to_rgb(240, 1, 1) == Rgb8{0, 0, 255});
  CHECK(hsv_to_rgb(60, 1, 1) == Rgb8{255, 255, 0});
  CHECK(hsv_to_rgb(0, 0.5, 1) == Rgb8{255, 128, 128});
}

TEST_CASE("hsv_to_rgb domain") {
  CHECK_THROWS_AS(hsv_to_rgb(360, 0.5, 1), ArgumentError);
  CHECK_THROWS_AS(hsv_to_rgb(-1, 0.5, 1), ArgumentError);
  CHECK_THROWS_AS(hsv_to_rgb(0, 1.5, 1), ArgumentError);
  CHECK_THROWS_AS(hsv_to_rgb(0, 0.5, -0.1), ArgumentError);
  CHECK_THROWS_AS(hsv_to_rgb(std::nan(""), 0.5, 1), ArgumentError);
}

TEST_CASE("channel sum is maximal only for unsaturated colour") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> hue(0.0, 360.0), sat(1.0 / 255.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double h = hue(rng);
    CHECK(channel_sum(hsv_to_rgb(h, 0.0, 1.0)) == 765);
    CHECK(channel_sum(hsv_to_rgb(h, sat(rng), 1.0)) < 765);
  }
}

TEST_CASE("channel sum is non-increasing in saturation") {
  for (int k = 0; k < 360; k += 7) {
    int prev = 765;
    for (int s = 0; s <= 1000; ++s) {
      const int sum = channel_sum(hsv_to_rgb(k, s / 1000.0, 1.0));
      CHECK(sum <= prev);
      prev = sum;
    }
  }
}

TEST_CASE("rotating flow by 120 degrees preserves the channel sum") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  const double c = std::cos(2 * std::numbers::pi / 3), s = std::sin(2 * std::numbers::pi / 3);
  for (int i = 0; i < 5000; ++i) {
    const double vx = d(rng), vy = d(rng);
    const auto a = hsv_to_rgb(flow_to_hsv(vx, vy, 3.0));
    const auto b = hsv_to_rgb(flow_to_hsv(c * vx - s * vy, s * vx + c * vy, 3.0));
    CHECK(std::abs(channel_sum(a) - channel_sum(b)) <= 2);
  }
}

TEST_CASE("render_flow") {
  SUBCASE("all-zero field is white") {
    const auto img = render_flow(field(7, 5));
    for (int b = 0; b < 3; ++b) CHECK((img.band(b) == 255).all());
  }
  SUBCASE("single unit vector among zeros renders pure red") {
    auto f = field(5, 4);
    f.vx(2, 3) = 1.0;
    const auto img = render_flow(f);
    CHECK(img.r(2, 3) == 255);
    CHECK(img.g(2, 3) == 0);
    CHECK(img.b(2, 3) == 0);
    int white = 0;
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 5; ++x) white += img.r(y, x) == 255 && img.g(y, x) == 255 && img.b(y, x) == 255;
    CHECK(white == 19);
  }
  SUBCASE("fixed normalization saturates at vmax") {
    auto f = field(2, 1);
    f.vx(0, 0) = 0.5;
    f.vx(0, 1) = 4.0;
    const auto img = render_flow(f, HsvParams::fixed(1.0));
    CHECK(img.g(0, 0) == 128);
    CHECK(img.g(0, 1) == 0);
    CHECK_THROWS_AS(render_flow(f, HsvParams::fixed(0.0)), ArgumentError);
  }
  SUBCASE("dimensions and determinism") {
    std::mt19937 rng(3);
    std::normal_distribution<double> d(0, 1);
    auto f = field(9, 6);
    for (int y = 0; y < 6; ++y)
      for (int x = 0; x < 9; ++x) f.vx(y, x) = d(rng), f.vy(y, x) = d(rng);
    const auto a = render_flow(f), b = render_flow(f);
    CHECK(a.width() == 9);
    CHECK(a.height() == 6);
    for (int k = 0; k < 3; ++k) CHECK((a.band(k) == b.band(k)).all());
  }
}

TEST_CASE("faster pixels never brighten") {
  auto f = field(50, 1);
  for (int x = 0; x < 50; ++x) f.vx(0, x) = x * 0.1;
  const auto img = render_flow(f);
  for (int x = 1; x < 50; ++x) {
    const int a = img.r(0, x - 1) + img.g(0, x - 1) + img.b(0, x - 1);
    const int b = img.r(0, x) + img.g(0, x) + img.b(0, x);
    CHECK(b <= a);
  }
}
