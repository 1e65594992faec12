#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <fmt/format.h>

#include "moft/metrics.hpp"
#include "moft/synth.hpp"
#include "support.hpp"

using namespace moft;

namespace {

std::vector<MetricSample> with_overlap(std::initializer_list<double> s) {
  std::vector<MetricSample> out;
  for (double v : s) out.push_back({out.size(), v, 0.0});
  return out;
}

std::vector<MetricSample> with_cle(std::initializer_list<double> c) {
  std::vector<MetricSample> out;
  for (double v : c) out.push_back({out.size(), 0.0, v});
  return out;
}

}  // namespace

TEST_CASE("overlap examples") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(overlap(a, a) == 1.0);
  CHECK(overlap(a, {20, 0, 10, 10}) == 0.0);
  CHECK(overlap(a, {10, 0, 10, 10}) == 0.0);
  CHECK(std::abs(overlap(a, {5, 0, 10, 10}) - 1.0 / 3.0) < 1e-12);
  CHECK_THROWS_AS(overlap(a, {0, 0, 0, 10}), ArgumentError);
  CHECK_THROWS_AS(overlap({0, 0, 3, -1}, a), ArgumentError);
}

TEST_CASE("cle examples") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(cle(a, a) == 0.0);
  CHECK(std::abs(cle(a, a.shifted(3, 4)) - 5.0) < 1e-12);
  CHECK(std::abs(cle(a, {0, 0, 20, 10}) - 5.0) < 1e-12);
}

TEST_CASE("overlap and cle properties") {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> p(-20, 20), e(1, 15);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a{p(rng), p(rng), e(rng), e(rng)}, b{p(rng), p(rng), e(rng), e(rng)};
    const double s = overlap(a, b);
    CHECK(s == overlap(b, a));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(overlap(a, a) == 1.0);
    const int dx = p(rng), dy = p(rng);
    CHECK(overlap(a.shifted(dx, dy), b.shifted(dx, dy)) == s);
    CHECK(cle(a.shifted(dx, dy), b.shifted(dx, dy)) == cle(a, b));
    CHECK(cle(a, b) >= 0.0);
  }
}

TEST_CASE("success curve AUC fractions") {
  CHECK(success_curve(with_overlap({1.0, 1.0, 1.0})).auc == doctest::Approx(100.0 / 101.0).epsilon(1e-14));
  CHECK(success_curve(with_overlap({0.0, 0.0})).auc == 0.0);
  const auto half = success_curve(with_overlap({0.5, 0.5}));
  CHECK(half.auc == doctest::Approx(50.0 / 101.0).epsilon(1e-14));
  CHECK(half.rate_at(0.49) == 1.0);
  CHECK(half.rate_at(0.5) == 0.0);
  REQUIRE(half.points.size() == 101);
  CHECK(half.points.front().threshold == 0.0);
  CHECK(half.points.back().threshold == 1.0);
  CHECK_THROWS_AS(success_curve({}), ArgumentError);
}

TEST_CASE("precision curve AUC fractions") {
  CHECK(precision_curve(with_cle({0.0, 0.0})).auc == 1.0);
  CHECK(precision_curve(with_cle({100.0})).auc == 0.0);
  const auto five = precision_curve(with_cle({5.0}));
  CHECK(five.auc == doctest::Approx(46.0 / 51.0).epsilon(1e-14));
  CHECK(five.rate_at(4) == 0.0);
  CHECK(five.rate_at(5) == 1.0);
  CHECK(five.points.size() == 51);
  CHECK_THROWS_AS(precision_curve({}), ArgumentError);
}

TEST_CASE("curve monotonicity and AUC definition") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> s(0.0, 1.0), c(0.0, 60.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MetricSample> samples;
    for (int i = 0; i < 40; ++i) samples.push_back({static_cast<std::size_t>(i), s(rng), c(rng)});
    const auto sc = success_curve(samples), pc = precision_curve(samples);
    double sum = 0.0;
    for (std::size_t k = 0; k < sc.points.size(); ++k) {
      sum += sc.points[k].rate;
      if (k) CHECK(sc.points[k].rate <= sc.points[k - 1].rate);
    }
    CHECK(sc.auc == doctest::Approx(sum / 101.0).epsilon(1e-12));
    sum = 0.0;
    for (std::size_t k = 0; k < pc.points.size(); ++k) {
      sum += pc.points[k].rate;
      if (k) CHECK(pc.points[k].rate >= pc.points[k - 1].rate);
    }
    CHECK(pc.auc == doctest::Approx(sum / 51.0).epsilon(1e-12));
  }
}

TEST_CASE("score skips the initial frame by default") {
  const std::vector<BoundingBox> truth{{0, 0, 4, 4}, {1, 0, 4, 4}, {2, 0, 4, 4}};
  const std::vector<BoundingBox> tracked{{0, 0, 4, 4}, {1, 0, 4, 4}, {5, 0, 4, 4}};
  const auto s = score(tracked, truth);
  REQUIRE(s.size() == 2);
  CHECK(s[0].frame == 1);
  CHECK(s[0].overlap == 1.0);
  CHECK(s[1].cle == 3.0);
  CHECK(score(tracked, truth, 0).size() == 3);
  CHECK_THROWS_AS(score(tracked, std::vector<BoundingBox>(truth.begin(), truth.begin() + 2)), ArgumentError);
}

TEST_CASE("curve csv and svg") {
  const auto c = precision_curve(with_cle({5.0}));
  const auto csv = format_curve(c);
  CHECK(csv.rfind("threshold,rate\n0,0\n", 0) == 0);
  CHECK(csv.find("\n5,1\n") != std::string::npos);
  CHECK(csv.find("# auc=0.9019607843137255\n") != std::string::npos);
  const auto svg = curve_svg(c);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("sweep ordering and table") {
  auto spec = moft::test::fast_scene(4);
  spec.frames = 20;
  const Scene scene = generate(spec);
  TrackConfig base;
  base.flow.window_half = moft::test::kSceneWindowHalf;

  const std::vector<int> one_i{1}, one_r{5};
  const auto single = sweep(scene.frames, scene.truth[0], scene.truth, one_i, one_r, base);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].interval == 1);
  CHECK(single.rows[0].radius == 5);
  base.radius = 5;
  const auto direct = success_curve(score(track_sequence(scene.frames, scene.truth[0], base).boxes, scene.truth)).auc;
  CHECK(single.rows[0].auc == direct);
  CHECK(format_sweep(single) == fmt::format("interval,radius,auc\n1,5,{}\n# best=1,5\n", direct));

  const std::vector<int> is{5, 1, 1}, rs{7, 2};
  const auto grid = sweep(scene.frames, scene.truth[0], scene.truth, is, rs, base);
  REQUIRE(grid.rows.size() == 4);
  const std::pair<int, int> order[] = {{1, 2}, {1, 7}, {5, 2}, {5, 7}};
  double best = -1.0;
  std::size_t best_row = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(grid.rows[k].interval == order[k].first);
    CHECK(grid.rows[k].radius == order[k].second);
    if (grid.rows[k].auc > best) best = grid.rows[k].auc, best_row = k;
  }
  CHECK(grid.best == best_row);

  const std::vector<int> none;
  CHECK_THROWS_AS(sweep(scene.frames, scene.truth[0], scene.truth, none, rs, base), ArgumentError);
  const std::vector<BoundingBox> short_truth(scene.truth.begin(), scene.truth.begin() + 5);
  CHECK_THROWS_AS(sweep(scene.frames, scene.truth[0], short_truth, is, rs, base), ArgumentError);
}

TEST_CASE("sweep best row is the first maximum") {
  SweepTable t;
  t.rows = {{1, 2, 0.5}, {1, 5, 0.7}, {5, 2, 0.7}};
  t.best = 1;
  CHECK(format_sweep(t) == "interval,radius,auc\n1,2,0.5\n1,5,0.7\n5,2,0.7\n# best=1,5\n");
  CHECK(format_sweep({}) == "interval,radius,auc\n");
}
