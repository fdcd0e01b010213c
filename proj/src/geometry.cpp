#include "wirepoly/geometry.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace wirepoly {

int orientation(Point2 a, Point2 b, Point2 c) {
  double v = cross(b - a, c - a);
  if (v > kGeomEps) return 1;
  if (v < -kGeomEps) return -1;
  return 0;
}

bool point_on_segment(Point2 p, Point2 a, Point2 b) {
  if (orientation(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  int d1 = orientation(c, d, a);
  int d2 = orientation(c, d, b);
  int d3 = orientation(a, b, c);
  int d4 = orientation(a, b, d);

  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && point_on_segment(a, c, d)) return true;
  if (d2 == 0 && point_on_segment(b, c, d)) return true;
  if (d3 == 0 && point_on_segment(c, a, b)) return true;
  if (d4 == 0 && point_on_segment(d, a, b)) return true;
  return false;
}

double polygon_signed_area(std::span<const Point2> v) {
  const std::size_t n = v.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += cross(v[i], v[(i + 1) % n]);
  }
  return 0.5 * acc;
}

namespace {

// Adjacent edges (prev,s) and (s,next) must meet only at s; a collinear
// fold-back (spike) makes them overlap along a stretch.
bool adjacent_edges_overlap(Point2 prev, Point2 s, Point2 next) {
  if (orientation(prev, s, next) != 0) return false;
  // Collinear: overlap iff prev and next lie on the same side of s.
  return dot(prev - s, next - s) > 0.0;
}

}  // namespace

bool polygon_is_simple(std::span<const Point2> v) {
  const std::size_t n = v.size();
  if (n < 3) return false;

  // Zero-length edges are malformed.
  for (std::size_t i = 0; i < n; ++i) {
    if (squared_distance(v[i], v[(i + 1) % n]) <= kGeomEps * kGeomEps) return false;
  }
  if (std::abs(polygon_signed_area(v)) <= kGeomEps) return false;

  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = v[i];
    Point2 b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      Point2 c = v[j];
      Point2 d = v[(j + 1) % n];
      bool share_b = (j == i + 1);
      bool share_a = (i == 0 && j == n - 1);
      if (share_b) {
        if (adjacent_edges_overlap(a, b, d)) return false;
      } else if (share_a) {
        if (adjacent_edges_overlap(d, a, b)) return false;
      } else {
        if (segments_intersect(a, b, c, d)) return false;
      }
    }
  }
  return true;
}

double polygon_area(std::span<const Point2> v) {
  if (!polygon_is_simple(v)) {
    throw std::invalid_argument("polygon_area: polygon is not simple");
  }
  return std::abs(polygon_signed_area(v));
}

Point2 polygon_centroid(std::span<const Point2> v) {
  if (!polygon_is_simple(v)) {
    throw std::invalid_argument("polygon_centroid: polygon is not simple");
  }
  const std::size_t n = v.size();
  double a = polygon_signed_area(v);
  if (std::abs(a) <= kGeomEps) {
    throw std::invalid_argument("polygon_centroid: zero area");
  }
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Point2 p = v[i];
    Point2 q = v[(i + 1) % n];
    double w = cross(p, q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

Containment locate_point(Point2 p, std::span<const Point2> v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_on_segment(p, v[i], v[(i + 1) % n])) return Containment::Boundary;
  }
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = v[i];
    Point2 b = v[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      double x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x_int > p.x) inside = !inside;
    }
  }
  return inside ? Containment::Inside : Containment::Outside;
}

PixelMask::PixelMask(int resolution) : res_(resolution) {
  if (resolution < 1) throw std::invalid_argument("PixelMask: resolution must be >= 1");
  std::size_t bits = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  words_.assign((bits + 63) / 64, 0);
}

std::int64_t PixelMask::count() const {
  std::int64_t c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

std::int64_t PixelMask::intersection_count(const PixelMask& a, const PixelMask& b) {
  if (a.res_ != b.res_) throw std::invalid_argument("PixelMask: resolution mismatch");
  std::int64_t c = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) c += std::popcount(a.words_[i] & b.words_[i]);
  return c;
}

std::int64_t PixelMask::union_count(const PixelMask& a, const PixelMask& b) {
  if (a.res_ != b.res_) throw std::invalid_argument("PixelMask: resolution mismatch");
  std::int64_t c = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) c += std::popcount(a.words_[i] | b.words_[i]);
  return c;
}

PixelMask rasterize(const Polygon& polygon, int resolution) {
  if (resolution < 1) throw std::invalid_argument("rasterize: resolution must be >= 1");
  std::span<const Point2> v(polygon.vertices);
  if (!polygon_is_simple(v)) {
    throw std::invalid_argument("rasterize: polygon is not simple");
  }
  PixelMask mask(resolution);

  double min_x = v[0].x, max_x = v[0].x, min_y = v[0].y, max_y = v[0].y;
  for (Point2 p : v) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  double r = static_cast<double>(resolution);
  int ix0 = std::max(0, static_cast<int>(std::floor(min_x * r - 0.5)));
  int ix1 = std::min(resolution - 1, static_cast<int>(std::ceil(max_x * r - 0.5)));
  int iy0 = std::max(0, static_cast<int>(std::floor(min_y * r - 0.5)));
  int iy1 = std::min(resolution - 1, static_cast<int>(std::ceil(max_y * r - 0.5)));

  for (int iy = iy0; iy <= iy1; ++iy) {
    double cy = (iy + 0.5) / r;
    for (int ix = ix0; ix <= ix1; ++ix) {
      double cx = (ix + 0.5) / r;
      if (locate_point({cx, cy}, v) != Containment::Outside) mask.set(ix, iy);
    }
  }
  return mask;
}

double polygon_iou(const Polygon& a, const Polygon& b, int resolution) {
  PixelMask ma = rasterize(a, resolution);
  PixelMask mb = rasterize(b, resolution);
  std::int64_t uni = PixelMask::union_count(ma, mb);
  if (uni == 0) return 0.0;
  return static_cast<double>(PixelMask::intersection_count(ma, mb)) / static_cast<double>(uni);
}

}  // namespace wirepoly
