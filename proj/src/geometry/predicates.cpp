#include "insq/geometry/predicates.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include <boost/multiprecision/gmp.hpp>

namespace insq::geo {

namespace {

using Rational = boost::multiprecision::mpq_rational;

constexpr double kEpsilon = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;
constexpr double kIncircleBound = (10.0 + 96.0 * kEpsilon) * kEpsilon;

std::atomic<long long> g_fallbacks{0};

int sign_of(const Rational& r) { return r.sign() > 0 ? 1 : (r.sign() < 0 ? -1 : 0); }

int orient_exact(const Point& a, const Point& b, const Point& c) {
  const Rational acx = Rational(a.x) - Rational(c.x);
  const Rational bcx = Rational(b.x) - Rational(c.x);
  const Rational acy = Rational(a.y) - Rational(c.y);
  const Rational bcy = Rational(b.y) - Rational(c.y);
  return sign_of(acx * bcy - acy * bcx);
}

int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Rational adx = Rational(a.x) - Rational(d.x);
  const Rational ady = Rational(a.y) - Rational(d.y);
  const Rational bdx = Rational(b.x) - Rational(d.x);
  const Rational bdy = Rational(b.y) - Rational(d.y);
  const Rational cdx = Rational(c.x) - Rational(d.x);
  const Rational cdy = Rational(c.y) - Rational(d.y);
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  const double bound = kOrientBound * detsum;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  ++g_fallbacks;
  return orient_exact(a, b, c);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  ++g_fallbacks;
  return incircle_exact(a, b, c, d);
}

long long exact_fallback_count() { return g_fallbacks.load(); }

bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace insq::geo
