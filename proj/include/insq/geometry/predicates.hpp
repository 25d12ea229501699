#pragma once

#include "insq/geometry/point.hpp"

namespace insq::geo {

// Sign of the orientation determinant of (a, b, c): +1 when c lies to the
// left of a->b, -1 to the right, 0 when collinear. Exact for all finite
// double inputs: a floating-point filter answers the easy cases and an
// exact rational evaluation settles the rest.
int orient2d(const Point& a, const Point& b, const Point& c);

// Sign of the in-circle determinant: +1 when d lies strictly inside the
// circle through a, b, c (given counterclockwise), -1 strictly outside,
// 0 when the four points are cocircular. Exact like orient2d.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

// Number of times the exact fallback has been taken in this process.
// Diagnostic only.
long long exact_fallback_count();

}  // namespace insq::geo
