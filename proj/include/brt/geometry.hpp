#ifndef BRT_GEOMETRY_HPP
#define BRT_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace brt {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Distance from x to the nearest integer multiple of 2*pi.
inline double dist_to_2pi_multiple(double x) {
  double r = std::remainder(x, kTwoPi);
  return std::abs(r);
}

/// A reflecting trajectory in the closed unit disk: n chords, each
/// subtending central angle alpha, starting at boundary angle iota and
/// ending at kappa, with winding number m so that n*alpha = kappa - iota
/// + 2*pi*m.  Angles are kept unwrapped; membership tests reduce mod 2*pi.
struct BrokenRay {
  int n = 1;
  long m = 0;
  double alpha = 0.0;
  double iota = 0.0;
  double kappa = 0.0;

  /// Distance from the origin to each chord.
  double z() const { return std::cos(alpha / 2.0); }
  /// Length of each chord.
  double d() const { return 2.0 * std::abs(std::sin(alpha / 2.0)); }

  void validate() const {
    if (n < 1) throw std::invalid_argument("BrokenRay: segment count must be >= 1");
    if (dist_to_2pi_multiple(alpha) < 1e-12)
      throw std::invalid_argument("BrokenRay: degenerate chord (alpha multiple of 2*pi)");
    double residual = n * alpha - (kappa - iota + kTwoPi * static_cast<double>(m));
    if (std::abs(residual) > 1e-12 * std::max(1.0, std::abs(n * alpha)))
      throw std::invalid_argument("BrokenRay: trajectory condition violated");
    double zz = z();
    if (!(zz >= 0.0 && zz < 1.0))
      throw std::invalid_argument("BrokenRay: chord distance out of [0,1)");
  }
};

/// Build a ray from the discrete parameters; alpha is derived from the
/// trajectory condition.
inline BrokenRay make_ray(int n, long m, double iota, double kappa) {
  if (n < 1) throw std::invalid_argument("make_ray: segment count must be >= 1");
  BrokenRay ray;
  ray.n = n;
  ray.m = m;
  ray.iota = iota;
  ray.kappa = kappa;
  ray.alpha = (kappa - iota + kTwoPi * static_cast<double>(m)) / n;
  if (dist_to_2pi_multiple(ray.alpha) < 1e-12)
    throw std::invalid_argument("make_ray: degenerate chord (alpha multiple of 2*pi)");
  ray.validate();
  return ray;
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Unit-circle vertices of the trajectory, angles iota + l*alpha.
inline std::vector<Point> trace(const BrokenRay& ray) {
  ray.validate();
  std::vector<Point> pts(ray.n + 1);
  for (int l = 0; l <= ray.n; ++l) {
    double th = ray.iota + l * ray.alpha;
    pts[l] = {std::cos(th), std::sin(th)};
  }
  return pts;
}

/// Specularity test for an arbitrary polyline with vertices on the unit
/// circle: at each interior vertex the outgoing direction must be the
/// reflection of the incoming one about the inward radial normal.
inline bool reflect_check_polyline(const std::vector<Point>& pts, double tol = 1e-10) {
  if (pts.size() < 3) throw std::invalid_argument("reflect_check: need at least 2 segments");
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Point& a = pts[i - 1];
    const Point& v = pts[i];
    const Point& b = pts[i + 1];
    double inx = v.x - a.x, iny = v.y - a.y;
    double outx = b.x - v.x, outy = b.y - v.y;
    double inlen = std::hypot(inx, iny), outlen = std::hypot(outx, outy);
    if (inlen == 0.0 || outlen == 0.0) return false;
    inx /= inlen; iny /= inlen;
    outx /= outlen; outy /= outlen;
    // Reflect the incoming direction about the normal (-v): r = d - 2(d.n)n
    // with n the unit radial direction at the vertex.
    double nlen = std::hypot(v.x, v.y);
    double nx = v.x / nlen, ny = v.y / nlen;
    double dn = inx * nx + iny * ny;
    double rx = inx - 2.0 * dn * nx;
    double ry = iny - 2.0 * dn * ny;
    if (std::abs(rx - outx) > tol || std::abs(ry - outy) > tol) return false;
  }
  return true;
}

inline bool reflect_check(const BrokenRay& ray, double tol = 1e-10) {
  if (ray.n < 2) throw std::invalid_argument("reflect_check: need n >= 2");
  return reflect_check_polyline(trace(ray), tol);
}

/// The boundary subset where rays may start and end.
struct TomographySet {
  struct Arc {
    double lo = 0.0;  // open interval (lo, hi) of boundary angles
    double hi = 0.0;
  };
  bool singleton = false;
  double point = 0.0;       // used when singleton
  std::vector<Arc> arcs;    // used otherwise

  static TomographySet make_singleton(double angle) {
    TomographySet e;
    e.singleton = true;
    e.point = angle;
    return e;
  }

  static TomographySet make_open(std::vector<Arc> arcs_in) {
    if (arcs_in.empty())
      throw std::invalid_argument("TomographySet: need at least one arc");
    for (const auto& a : arcs_in) {
      double len = a.hi - a.lo;
      if (!(len > 0.0 && len < kTwoPi))
        throw std::invalid_argument("TomographySet: arc length must be in (0, 2*pi)");
    }
    TomographySet e;
    e.singleton = false;
    e.arcs = std::move(arcs_in);
    return e;
  }

  static TomographySet full_circle() {
    return make_open({Arc{0.0, kTwoPi * (1.0 - 1e-15)}});
  }

  bool contains(double angle) const {
    if (singleton)
      return dist_to_2pi_multiple(angle - point) < 1e-12;
    for (const auto& a : arcs) {
      double rel = angle - a.lo;
      rel -= kTwoPi * std::floor(rel / kTwoPi);
      if (rel > 0.0 && rel < a.hi - a.lo) return true;
      // Near-full-circle arcs: accept the endpoints' closure gap too.
      if (a.hi - a.lo >= kTwoPi * (1.0 - 1e-14)) return true;
    }
    return false;
  }
};

/// All rays with chord distance z, symmetric about the axis (iota + kappa
/// = 2*axis), with both endpoints in E and 2 <= n <= n_max.  The winding
/// number is the nearest integer to n*alpha/(2*pi) so the endpoint offset
/// beta stays minimal.
inline std::vector<BrokenRay> enumerate_symmetric_rays(const TomographySet& E,
                                                       double axis, double z,
                                                       int n_max) {
  if (!E.contains(axis))
    throw std::invalid_argument("enumerate_symmetric_rays: axis not inside E");
  if (!(z >= 0.0 && z < 1.0))
    throw std::invalid_argument("enumerate_symmetric_rays: z out of [0,1)");
  double alpha = 2.0 * std::acos(z);
  std::vector<BrokenRay> out;
  for (int n = 2; n <= n_max; ++n) {
    long m = std::lround(n * alpha / kTwoPi);
    double beta = (n * alpha - kTwoPi * static_cast<double>(m)) / 2.0;
    BrokenRay ray;
    ray.n = n;
    ray.m = m;
    ray.alpha = alpha;
    ray.iota = axis - beta;
    ray.kappa = axis + beta;
    if (!E.contains(ray.iota) || !E.contains(ray.kappa)) continue;
    ray.validate();
    out.push_back(ray);
  }
  return out;
}

/// Closed orbits through a single boundary point: iota = kappa = point,
/// alpha = 2*pi*m/n with gcd(n, m) = 1 and 1 <= m < n/2.
inline std::vector<BrokenRay> enumerate_singleton_rays(double point, int n_max) {
  if (n_max < 2) throw std::invalid_argument("enumerate_singleton_rays: n_max must be >= 2");
  std::vector<BrokenRay> out;
  for (int n = 2; n <= n_max; ++n) {
    for (int m = 1; 2 * m < n; ++m) {
      if (std::gcd(n, m) != 1) continue;
      BrokenRay ray;
      ray.n = n;
      ray.m = m;
      ray.alpha = kTwoPi * m / n;
      ray.iota = point;
      ray.kappa = point;
      ray.validate();
      out.push_back(ray);
    }
  }
  return out;
}

/// Rotate a ray counterclockwise by phi (both endpoints shift by phi).
inline BrokenRay rotate_ray(const BrokenRay& ray, double phi) {
  BrokenRay out = ray;
  out.iota += phi;
  out.kappa += phi;
  return out;
}

}  // namespace brt

#endif
