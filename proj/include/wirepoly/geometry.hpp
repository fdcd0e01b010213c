#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace wirepoly {

// Tolerance for orientation / collinearity tests on normalized [0,1] coordinates.
inline constexpr double kGeomEps = 1e-12;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double squared_distance(Point2 a, Point2 b) { return dot(a - b, a - b); }
inline double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

/// Closed vertex ring; the first vertex is not repeated at the end.
/// vertex_ids optionally carries the junction id of each vertex (same length,
/// or empty when the polygon does not come from a wireframe).
struct Polygon {
  std::vector<Point2> vertices;
  std::vector<int> vertex_ids;
};

/// Sign of the turn a->b->c: +1 left, -1 right, 0 collinear within kGeomEps.
int orientation(Point2 a, Point2 b, Point2 c);

/// True if p lies on the closed segment [a,b] (collinear within kGeomEps).
bool point_on_segment(Point2 p, Point2 a, Point2 b);

/// Closed-segment intersection test; touching endpoints and collinear
/// overlaps count as intersecting.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// True iff the ring has >= 3 unique vertices, nonzero area, no zero-length
/// edges, no crossing between non-adjacent edges, and adjacent edges meeting
/// only at their shared endpoint. Malformed input returns false.
bool polygon_is_simple(std::span<const Point2> vertices);

double polygon_signed_area(std::span<const Point2> vertices);

/// Absolute shoelace area. Throws std::invalid_argument on a non-simple ring.
double polygon_area(std::span<const Point2> vertices);

/// Area-weighted centroid. Throws std::invalid_argument on a non-simple or
/// zero-area ring.
Point2 polygon_centroid(std::span<const Point2> vertices);

inline bool polygon_is_simple(const Polygon& p) { return polygon_is_simple(std::span<const Point2>(p.vertices)); }
inline double polygon_area(const Polygon& p) { return polygon_area(std::span<const Point2>(p.vertices)); }
inline Point2 polygon_centroid(const Polygon& p) { return polygon_centroid(std::span<const Point2>(p.vertices)); }

enum class Containment { Outside, Boundary, Inside };

/// Even-odd point-in-polygon classification with explicit boundary detection.
Containment locate_point(Point2 p, std::span<const Point2> vertices);

/// R x R bit grid over [0,1]^2; bit (ix, iy) covers the pixel whose center is
/// ((ix + 0.5)/R, (iy + 0.5)/R).
class PixelMask {
 public:
  explicit PixelMask(int resolution);

  int resolution() const { return res_; }
  bool test(int ix, int iy) const {
    std::size_t bit = index(ix, iy);
    return (words_[bit >> 6] >> (bit & 63)) & 1u;
  }
  void set(int ix, int iy) {
    std::size_t bit = index(ix, iy);
    words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
  }

  std::int64_t count() const;
  static std::int64_t intersection_count(const PixelMask& a, const PixelMask& b);
  static std::int64_t union_count(const PixelMask& a, const PixelMask& b);

 private:
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(res_) + static_cast<std::size_t>(ix);
  }
  int res_;
  std::vector<std::uint64_t> words_;
};

/// Pixel (ix, iy) is set iff its center is inside the polygon (even-odd rule);
/// a center exactly on the boundary counts as inside. Throws on resolution < 1
/// or a non-simple polygon.
PixelMask rasterize(const Polygon& polygon, int resolution);

/// |A and B| / |A or B| over the rasterized masks; 0 when the union is empty.
double polygon_iou(const Polygon& a, const Polygon& b, int resolution);

}  // namespace wirepoly
