#pragma once

// Dense single-scale Lucas-Kanade flow.
//
// Gradients are central differences on the first frame with clamp-to-edge
// borders; the temporal derivative is the plain frame difference. Each pixel
// solves the 2x2 normal equations accumulated over an m x m window (m odd,
// uniform weights, clamped borders). Window sums are accumulated rows-first
// in a fixed order, so solve_window and dense_flow agree bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "moft/frame_io.hpp"
#include "moft/types.hpp"

namespace moft {

enum class ApertureMode {
  /// Windows whose normal matrix is singular produce (0, 0).
  Zero,
  /// Degenerate windows with one dominant gradient direction produce normal flow.
  NormalFlow,
};

struct FlowConfig {
  int window_half = 7;
  double singular_threshold = 1e-6;
  ApertureMode aperture = ApertureMode::Zero;

  int window_size() const { return 2 * window_half + 1; }
  void validate() const {
    if (window_half < 1) throw ArgumentError("window_half must be >= 1");
    if (!(singular_threshold > 0.0)) throw ArgumentError("singular_threshold must be > 0");
  }
};

template <typename Scalar>
struct GradientField {
  Grid<Scalar> ix, iy, it;

  int width() const { return static_cast<int>(ix.cols()); }
  int height() const { return static_cast<int>(ix.rows()); }
};

template <typename Scalar>
struct FlowField {
  Grid<Scalar> vx, vy;
  /// True where the window was rejected as singular.
  Grid<bool> singular;

  int width() const { return static_cast<int>(vx.cols()); }
  int height() const { return static_cast<int>(vx.rows()); }
  Grid<Scalar> magnitude() const { return (vx.square() + vy.square()).sqrt(); }
};

namespace detail {

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

/// Central difference along columns (d/dx) with clamped borders.
template <typename Derived>
Grid<typename Derived::Scalar> diff_x(const Eigen::ArrayBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index w = f.cols();
  Grid<Scalar> d(f.rows(), w);
  if (w == 1) {
    d.setZero();
    return d;
  }
  if (w > 2) d.middleCols(1, w - 2) = (f.rightCols(w - 2) - f.leftCols(w - 2)) / Scalar(2);
  d.col(0) = (f.col(1) - f.col(0)) / Scalar(2);
  d.col(w - 1) = (f.col(w - 1) - f.col(w - 2)) / Scalar(2);
  return d;
}

template <typename Derived>
Grid<typename Derived::Scalar> diff_y(const Eigen::ArrayBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index h = f.rows();
  Grid<Scalar> d(h, f.cols());
  if (h == 1) {
    d.setZero();
    return d;
  }
  if (h > 2) d.middleRows(1, h - 2) = (f.bottomRows(h - 2) - f.topRows(h - 2)) / Scalar(2);
  d.row(0) = (f.row(1) - f.row(0)) / Scalar(2);
  d.row(h - 1) = (f.row(h - 1) - f.row(h - 2)) / Scalar(2);
  return d;
}

/// Clamped box sum of half-width n, columns first then rows. The summation
/// order per output pixel is dy-major, dx-minor, ascending offsets.
template <typename Scalar>
Grid<Scalar> window_sum(const Grid<Scalar>& g, int n) {
  const int h = static_cast<int>(g.rows()), w = static_cast<int>(g.cols());
  Grid<Scalar> horiz(h, w);
  std::vector<int> cols(static_cast<std::size_t>(w + 2 * n));
  for (int k = 0; k < w + 2 * n; ++k) cols[static_cast<std::size_t>(k)] = clamp_index(k - n, w);
  for (int y = 0; y < h; ++y) {
    const Scalar* row = &g(y, 0);
    for (int x = 0; x < w; ++x) {
      Scalar s(0);
      for (int k = 0; k <= 2 * n; ++k) s += row[cols[static_cast<std::size_t>(x + k)]];
      horiz(y, x) = s;
    }
  }
  Grid<Scalar> out = Grid<Scalar>::Zero(h, w);
  for (int dy = -n; dy <= n; ++dy)
    for (int y = 0; y < h; ++y) out.row(y) += horiz.row(clamp_index(y + dy, h));
  return out;
}

}  // namespace detail

template <typename Scalar>
struct NormalSystem {
  Scalar sxx{0}, sxy{0}, syy{0}, sxt{0}, syt{0};

  Eigen::Matrix<Scalar, 2, 2> matrix() const {
    Eigen::Matrix<Scalar, 2, 2> m;
    m << sxx, sxy, sxy, syy;
    return m;
  }
  Vec2<Scalar> rhs() const { return {sxt, syt}; }
  Scalar determinant() const { return matrix().determinant(); }
};

/// Solves (AᵀA) v = −Aᵀb. Returns nullopt for a rejected (singular) window.
template <typename Scalar>
std::optional<Vec2<Scalar>> solve_normal_system(const NormalSystem<Scalar>& s, const FlowConfig& cfg) {
  const auto m = s.matrix();
  if (m.determinant() >= Scalar(cfg.singular_threshold)) return Vec2<Scalar>(-(m.inverse() * s.rhs()));
  if (cfg.aperture == ApertureMode::NormalFlow) {
    // Rank-1 structure: project onto the dominant gradient direction.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 2, 2>> eig(m);
    const Scalar lambda = eig.eigenvalues()(1);
    if (lambda >= Scalar(cfg.singular_threshold)) {
      const Vec2<Scalar> e = eig.eigenvectors().col(1);
      return Vec2<Scalar>(-(e.dot(s.rhs()) / lambda) * e);
    }
  }
  return std::nullopt;
}

template <typename D0, typename D1>
GradientField<typename D0::Scalar> compute_gradients(const Eigen::ArrayBase<D0>& f0, const Eigen::ArrayBase<D1>& f1) {
  using Scalar = typename D0::Scalar;
  if (f0.rows() != f1.rows() || f0.cols() != f1.cols())
    throw ShapeError("gradient frames differ in size: " + std::to_string(f0.cols()) + "x" + std::to_string(f0.rows()) +
                     " vs " + std::to_string(f1.cols()) + "x" + std::to_string(f1.rows()));
  GradientField<Scalar> g;
  g.ix = detail::diff_x(f0);
  g.iy = detail::diff_y(f0);
  g.it = f1.template cast<Scalar>() - f0;
  return g;
}

inline GradientField<double> compute_gradients(const Frame& f0, const Frame& f1) {
  return compute_gradients(f0.pixels, f1.pixels);
}

/// Accumulates the window sums around (cx, cy) in the same order as dense_flow.
template <typename Scalar>
NormalSystem<Scalar> accumulate_window(const GradientField<Scalar>& g, int cx, int cy, int n) {
  const int w = g.width(), h = g.height();
  if (cx < 0 || cy < 0 || cx >= w || cy >= h) throw BoundsError("window centre outside gradient grid");
  NormalSystem<Scalar> s;
  for (int dy = -n; dy <= n; ++dy) {
    const int y = detail::clamp_index(cy + dy, h);
    NormalSystem<Scalar> row;
    for (int dx = -n; dx <= n; ++dx) {
      const int x = detail::clamp_index(cx + dx, w);
      const Scalar ix = g.ix(y, x), iy = g.iy(y, x), it = g.it(y, x);
      row.sxx += ix * ix;
      row.sxy += ix * iy;
      row.syy += iy * iy;
      row.sxt += ix * it;
      row.syt += iy * it;
    }
    s.sxx += row.sxx;
    s.sxy += row.sxy;
    s.syy += row.syy;
    s.sxt += row.sxt;
    s.syt += row.syt;
  }
  return s;
}

template <typename Scalar>
std::optional<Vec2<Scalar>> solve_window(const GradientField<Scalar>& g, int cx, int cy, const FlowConfig& cfg) {
  cfg.validate();
  return solve_normal_system(accumulate_window(g, cx, cy, cfg.window_half), cfg);
}

template <typename Scalar>
FlowField<Scalar> dense_flow(const GradientField<Scalar>& g, const FlowConfig& cfg) {
  cfg.validate();
  const int n = cfg.window_half;
  const Grid<Scalar> sxx = detail::window_sum<Scalar>(g.ix * g.ix, n);
  const Grid<Scalar> sxy = detail::window_sum<Scalar>(g.ix * g.iy, n);
  const Grid<Scalar> syy = detail::window_sum<Scalar>(g.iy * g.iy, n);
  const Grid<Scalar> sxt = detail::window_sum<Scalar>(g.ix * g.it, n);
  const Grid<Scalar> syt = detail::window_sum<Scalar>(g.iy * g.it, n);

  FlowField<Scalar> flow;
  flow.vx = Grid<Scalar>::Zero(g.height(), g.width());
  flow.vy = Grid<Scalar>::Zero(g.height(), g.width());
  flow.singular = Grid<bool>::Constant(g.height(), g.width(), true);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      const NormalSystem<Scalar> s{sxx(y, x), sxy(y, x), syy(y, x), sxt(y, x), syt(y, x)};
      if (const auto v = solve_normal_system(s, cfg)) {
        flow.vx(y, x) = (*v)(0);
        flow.vy(y, x) = (*v)(1);
        flow.singular(y, x) = false;
      }
    }
  return flow;
}

template <typename D0, typename D1>
FlowField<typename D0::Scalar> dense_flow(const Eigen::ArrayBase<D0>& f0, const Eigen::ArrayBase<D1>& f1,
                                          const FlowConfig& cfg) {
  return dense_flow(compute_gradients(f0, f1), cfg);
}

inline FlowField<double> dense_flow(const Frame& f0, const Frame& f1, const FlowConfig& cfg) {
  return dense_flow(compute_gradients(f0, f1), cfg);
}

/// Debug dump: "MOFTFLOW1 w h\n" then vx plane and vy plane, row-major little-endian float64.
std::vector<std::uint8_t> encode_flow_dump(const FlowField<double>& flow);
FlowField<double> decode_flow_dump(std::span<const std::uint8_t> bytes);

}  // namespace moft
