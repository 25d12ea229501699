#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace insq::geo {

using SiteId = std::int64_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Site {
  SiteId id = 0;
  Point pos;

  friend bool operator==(const Site&, const Site&) = default;
};

// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  bool contains(const Point& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  bool degenerate() const { return !(x1 > x0) || !(y1 > y0); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Squared distance, evaluated as dx*dx + dy*dy in double. The build
// disables floating-point contraction so every caller gets the same bits.
inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Ordering of sites relative to a fixed query point: squared distance
// first, site id second. Every "closer than" decision in the plane goes
// through this type.
struct DistanceKey {
  double d2 = 0.0;
  SiteId id = 0;

  friend bool operator==(const DistanceKey&, const DistanceKey&) = default;
  friend std::strong_ordering operator<=>(const DistanceKey& a, const DistanceKey& b) {
    if (a.d2 < b.d2) return std::strong_ordering::less;
    if (b.d2 < a.d2) return std::strong_ordering::greater;
    return a.id <=> b.id;
  }
};

inline DistanceKey distance_key(const Point& q, const Site& s) {
  return {squared_distance(q, s.pos), s.id};
}

bool is_finite(const Point& p);

}  // namespace insq::geo
