// Copyright 2026 The eedeploy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * \file include/eedeploy/geometry.hpp
 *
 * \brief Planar helpers for Poisson-Voronoi tessellations: a uniform bucket
 *  grid over the sites, Voronoi cells by half-plane clipping, and uniform
 *  sampling inside a convex polygon.
 */

#ifndef EEDEPLOY_GEOMETRY_HPP
#define EEDEPLOY_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace eedeploy::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

using Polygon = std::vector<Point>;

/// Signed area; positive for counter-clockwise vertex order.
inline double signed_area(std::span<const Point> poly) {
  double twice = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

/// Keeps the part of `poly` with nx*x + ny*y <= c. Result goes to `out`.
inline void clip_halfplane(const Polygon& poly, double nx, double ny, double c, Polygon& out) {
  out.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double fp = nx * p.x + ny * p.y - c;
    const double fq = nx * q.x + ny * q.y - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
}

/// Bucket grid over a square [-half_extent, half_extent]^2.
class SiteGrid {
public:
  SiteGrid(std::span<const Point> sites, double half_extent, double cell_size)
      : sites_(sites), half_extent_(half_extent), cell_size_(cell_size) {
    dim_ = std::max(1, static_cast<int>(std::ceil(2.0 * half_extent / cell_size)));
    start_.assign(static_cast<std::size_t>(dim_) * dim_ + 1, 0);
    std::vector<int> cell_of(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
      cell_of[i] = linear(index(sites[i].x), index(sites[i].y));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    members_.resize(sites.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < sites.size(); ++i) members_[fill[cell_of[i]]++] = static_cast<int>(i);
  }

  int dimension() const { return dim_; }
  double cell_size() const { return cell_size_; }

  int index(double v) const {
    return std::clamp(static_cast<int>(std::floor((v + half_extent_) / cell_size_)), 0, dim_ - 1);
  }

  /// Calls f(site_index) for every site in grid cells at Chebyshev
  /// distance exactly `ring` from cell (cx, cy). Returns false when the ring
  /// lies entirely outside the grid.
  template <typename F>
  bool for_each_in_ring(int cx, int cy, int ring, F&& f) const {
    bool any = false;
    auto visit = [&](int gx, int gy) {
      if (gx < 0 || gy < 0 || gx >= dim_ || gy >= dim_) return;
      any = true;
      const int c = linear(gx, gy);
      for (int m = start_[c]; m < start_[c + 1]; ++m) f(members_[m]);
    };
    if (ring == 0) {
      visit(cx, cy);
      return any;
    }
    for (int d = -ring; d <= ring; ++d) {
      visit(cx + d, cy - ring);
      visit(cx + d, cy + ring);
    }
    for (int d = -ring + 1; d <= ring - 1; ++d) {
      visit(cx - ring, cy + d);
      visit(cx + ring, cy + d);
    }
    return any;
  }

  std::span<const Point> sites() const { return sites_; }

private:
  int linear(int gx, int gy) const { return gy * dim_ + gx; }

  std::span<const Point> sites_;
  double half_extent_;
  double cell_size_;
  int dim_ = 1;
  std::vector<int> start_;
  std::vector<int> members_;
};

/// Voronoi cell of `site` among the grid's sites, bounded by the grid square.
///
/// Neighbours are clipped ring by ring; once every site closer than twice
/// the farthest cell vertex has been used, the cell is exact.
inline void voronoi_cell(const SiteGrid& grid, std::size_t site, double half_extent, Polygon& cell,
                         Polygon& scratch) {
  const auto sites = grid.sites();
  const Point s = sites[site];
  cell = {{-half_extent, -half_extent}, {half_extent, -half_extent}, {half_extent, half_extent},
          {-half_extent, half_extent}};
  const int cx = grid.index(s.x);
  const int cy = grid.index(s.y);
  auto clip = [&](int j) {
    if (static_cast<std::size_t>(j) == site) return;
    const Point t = sites[j];
    const double nx = t.x - s.x;
    const double ny = t.y - s.y;
    const double c = 0.5 * ((t.x * t.x + t.y * t.y) - (s.x * s.x + s.y * s.y));
    if (std::none_of(cell.begin(), cell.end(), [&](const Point& v) { return nx * v.x + ny * v.y > c; })) return;
    clip_halfplane(cell, nx, ny, c, scratch);
    cell.swap(scratch);
  };
  for (int ring = 0;; ++ring) {
    if (!grid.for_each_in_ring(cx, cy, ring, clip)) break;
    double reach = 0.0;
    for (const Point& v : cell) reach = std::max(reach, squared_distance(v, s));
    const double covered = ring * grid.cell_size();
    if (covered * covered >= 4.0 * reach) break;
  }
}

/// Uniform point in a convex polygon via a triangle fan weighted by area.
class ConvexSampler {
public:
  explicit ConvexSampler(const Polygon& poly) : poly_(poly) {
    cumulative_.reserve(poly.size());
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      total += std::abs(triangle_area(poly[0], poly[i], poly[i + 1]));
      cumulative_.push_back(total);
    }
  }

  double area() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  template <typename Rng>
  Point operator()(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double pick = unif(rng) * area();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                                cumulative_.size() - 1);
    const Point& a = poly_[0];
    const Point& b = poly_[t + 1];
    const Point& c = poly_[t + 2];
    double u = unif(rng);
    double v = unif(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    return {a.x + u * (b.x - a.x) + v * (c.x - a.x), a.y + u * (b.y - a.y) + v * (c.y - a.y)};
  }

private:
  static double triangle_area(Point a, Point b, Point c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  }

  const Polygon& poly_;
  std::vector<double> cumulative_;
};

}  // namespace eedeploy::geometry

#endif  // EEDEPLOY_GEOMETRY_HPP
