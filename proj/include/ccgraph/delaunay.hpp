#pragma once

// Incremental Bowyer-Watson Delaunay triangulation of a small planar point
// set. Co-circular configurations resolve to the lexicographically smallest
// diagonal.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "ccgraph/error.hpp"
#include "ccgraph/graph.hpp"

namespace ccgraph {

using Triangle = std::array<int, 3>;

namespace detail {

inline double orient2d(const Point2 &a, const Point2 &b, const Point2 &c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

struct InCircle {
  double det;   // > 0 when d lies inside the circle through ccw a, b, c
  double bound; // magnitude scale of the terms of det
};

inline InCircle incircle(const Point2 &a, const Point2 &b, const Point2 &c,
                         const Point2 &d) {
  const double adx = a[0] - d[0], ady = a[1] - d[1];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1];
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double t1 = alift * (bdx * cdy - bdy * cdx);
  const double t2 = blift * (cdx * ady - cdy * adx);
  const double t3 = clift * (adx * bdy - ady * bdx);
  const double bound =
      alift * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) +
      blift * (std::abs(cdx * ady) + std::abs(cdy * adx)) +
      clift * (std::abs(adx * bdy) + std::abs(ady * bdx));
  return {t1 + t2 + t3, bound};
}

inline constexpr double kCocircularTolerance = 1e-10;

inline Triangle make_ccw(const std::vector<Point2> &pts, int a, int b, int c) {
  if (orient2d(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)],
               pts[static_cast<std::size_t>(c)]) < 0.0)
    std::swap(b, c);
  return {a, b, c};
}

inline std::vector<Triangle> bowyer_watson(const std::vector<Point2> &input,
                                           double super_scale) {
  const int n = static_cast<int>(input.size());
  double minx = input[0][0], maxx = minx, miny = input[0][1], maxy = miny;
  for (const auto &p : input) {
    minx = std::min(minx, p[0]);
    maxx = std::max(maxx, p[0]);
    miny = std::min(miny, p[1]);
    maxy = std::max(maxy, p[1]);
  }
  const double span = std::max({maxx - minx, maxy - miny, 1e-12});
  const double cx = 0.5 * (minx + maxx), cy = 0.5 * (miny + maxy);
  const double s = super_scale * span;

  std::vector<Point2> pts = input;
  pts.push_back({cx - 2.0 * s, cy - s});
  pts.push_back({cx + 2.0 * s, cy - s});
  pts.push_back({cx, cy + 2.0 * s});
  std::vector<Triangle> tris{make_ccw(pts, n, n + 1, n + 2)};

  for (int p = 0; p < n; ++p) {
    const Point2 &pt = pts[static_cast<std::size_t>(p)];
    std::vector<Triangle> keep;
    std::map<Edge, int> boundary;
    for (const auto &t : tris) {
      const auto ic = incircle(pts[static_cast<std::size_t>(t[0])],
                               pts[static_cast<std::size_t>(t[1])],
                               pts[static_cast<std::size_t>(t[2])], pt);
      if (ic.det > kCocircularTolerance * ic.bound) {
        for (int e = 0; e < 3; ++e) {
          int a = t[static_cast<std::size_t>(e)];
          int b = t[static_cast<std::size_t>((e + 1) % 3)];
          if (a > b)
            std::swap(a, b);
          ++boundary[{a, b}];
        }
      } else {
        keep.push_back(t);
      }
    }
    for (const auto &[e, count] : boundary)
      if (count == 1)
        keep.push_back(make_ccw(pts, e.first, e.second, p));
    tris = std::move(keep);
  }

  std::vector<Triangle> out;
  for (const auto &t : tris)
    if (t[0] < n && t[1] < n && t[2] < n)
      out.push_back(t);
  return out;
}

inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  const int n = static_cast<int>(pts.size());
  std::vector<Point2> hull(2 * static_cast<std::size_t>(n));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
      --k;
    hull[static_cast<std::size_t>(k++)] = pts[static_cast<std::size_t>(i)];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && orient2d(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
      --k;
    hull[static_cast<std::size_t>(k++)] = pts[static_cast<std::size_t>(i)];
  }
  hull.resize(static_cast<std::size_t>(std::max(k - 1, 0)));
  return hull;
}

// Number of points on the hull boundary, including points interior to hull
// edges.
inline int boundary_count(const std::vector<Point2> &pts,
                          const std::vector<Point2> &hull) {
  int count = 0;
  for (const auto &p : pts) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Point2 &a = hull[i];
      const Point2 &b = hull[(i + 1) % hull.size()];
      if (orient2d(a, b, p) == 0.0 && p[0] >= std::min(a[0], b[0]) &&
          p[0] <= std::max(a[0], b[0]) && p[1] >= std::min(a[1], b[1]) &&
          p[1] <= std::max(a[1], b[1])) {
        ++count;
        break;
      }
    }
  }
  return count;
}

// Flips co-circular diagonals towards the lexicographically smaller edge.
inline void resolve_cocircular(const std::vector<Point2> &pts,
                               std::vector<Triangle> &tris) {
  for (int pass = 0; pass < 1000; ++pass) {
    std::map<Edge, std::vector<std::pair<int, int>>> owners; // tri, opposite
    for (int ti = 0; ti < static_cast<int>(tris.size()); ++ti) {
      const auto &t = tris[static_cast<std::size_t>(ti)];
      for (int e = 0; e < 3; ++e) {
        int a = t[static_cast<std::size_t>(e)];
        int b = t[static_cast<std::size_t>((e + 1) % 3)];
        if (a > b)
          std::swap(a, b);
        owners[{a, b}].emplace_back(ti, t[static_cast<std::size_t>((e + 2) % 3)]);
      }
    }
    bool flipped = false;
    for (const auto &[edge, own] : owners) {
      if (own.size() != 2)
        continue;
      const int c = own[0].second, d = own[1].second;
      const Edge other{std::min(c, d), std::max(c, d)};
      if (!(other < edge))
        continue;
      const auto &t0 = tris[static_cast<std::size_t>(own[0].first)];
      const auto ic = incircle(pts[static_cast<std::size_t>(t0[0])],
                               pts[static_cast<std::size_t>(t0[1])],
                               pts[static_cast<std::size_t>(t0[2])],
                               pts[static_cast<std::size_t>(d)]);
      if (std::abs(ic.det) > kCocircularTolerance * ic.bound)
        continue;
      tris[static_cast<std::size_t>(own[0].first)] =
          make_ccw(pts, edge.first, c, d);
      tris[static_cast<std::size_t>(own[1].first)] =
          make_ccw(pts, edge.second, c, d);
      flipped = true;
      break;
    }
    if (!flipped)
      return;
  }
}

} // namespace detail

inline std::vector<Triangle> delaunay_triangles(std::span<const Point2> points) {
  const std::vector<Point2> pts(points.begin(), points.end());
  if (pts.size() < 3)
    throw DomainError("triangulation needs at least 3 points");
  {
    std::vector<Point2> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DomainError("duplicate points");
  }
  const int n = static_cast<int>(pts.size());
  const auto hull_pts = detail::convex_hull(pts);
  if (hull_pts.size() < 3)
    throw DomainError("points are collinear");
  const int hull = detail::boundary_count(pts, hull_pts);
  // Euler: a triangulation of n points with h on the hull has 2n - 2 - h
  // triangles. A missing count means the super triangle was too close.
  const int expected = 2 * n - 2 - hull;
  for (double scale = 100.0; scale <= 1e7; scale *= 10.0) {
    auto tris = detail::bowyer_watson(pts, scale);
    if (static_cast<int>(tris.size()) == expected) {
      detail::resolve_cocircular(pts, tris);
      return tris;
    }
  }
  throw DomainError("triangulation failed on a degenerate point set");
}

inline std::vector<Edge> delaunay_triangulation(std::span<const Point2> points) {
  std::set<Edge> edges;
  for (const auto &t : delaunay_triangles(points))
    for (int e = 0; e < 3; ++e) {
      int a = t[static_cast<std::size_t>(e)];
      int b = t[static_cast<std::size_t>((e + 1) % 3)];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return {edges.begin(), edges.end()};
}

} // namespace ccgraph
