#ifndef BRT_FORWARD_HPP
#define BRT_FORWARD_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "brt/abel.hpp"
#include "brt/field.hpp"
#include "brt/geometry.hpp"
#include "brt/quadrature.hpp"

namespace brt {

/// Distance from kα to the nearest multiple of 2π decides which branch of
/// S_k applies; rays inside this window use the degenerate closed form.
inline constexpr double kDegenerateTol = 1e-9;
/// Rays just outside the degenerate window are numerically treacherous
/// (sin(kα/2) tiny); reconstruction plans exclude them.
inline constexpr double kNearDegenerateTol = 1e-6;

/// S_k(γ): the factor collecting the contributions of the n chords to the
/// k-th angular harmonic.
///   S_k = sin(k(κ-ι)/2) / sin(kα/2)            when kα ∉ 2πZ,
///   S_k = n·(-1)^{(n+1)·kα/(2π) + km}          when kα ∈ 2πZ.
/// Long-double argument reduction keeps the quotient accurate for large
/// n·k products.
inline double s_coefficient(int k, const BrokenRay& ray) {
  if (k < 0) throw std::invalid_argument("s_coefficient: order must be >= 0");
  if (k == 0) return static_cast<double>(ray.n);
  long double ka = static_cast<long double>(k) * static_cast<long double>(ray.alpha);
  long double twopi = 2.0L * std::numbers::pi_v<long double>;
  long double rem = std::remainder(ka, twopi);
  if (std::abs(static_cast<double>(rem)) < kDegenerateTol) {
    long j = std::lround(static_cast<double>(ka / twopi));
    long exponent = (static_cast<long>(ray.n) + 1) * j +
                    static_cast<long>(k) * ray.m;
    double sign = (exponent % 2 == 0) ? 1.0 : -1.0;
    return sign * ray.n;
  }
  // k(κ-ι)/2 = k·n·α/2 - π·k·m, so reduce through the trajectory
  // condition for accuracy.
  long double half_diff = static_cast<long double>(k) *
                          (static_cast<long double>(ray.kappa) -
                           static_cast<long double>(ray.iota)) / 2.0L;
  long double num = std::sin(std::remainder(half_diff, twopi));
  long double den = std::sin(std::remainder(ka / 2.0L, twopi));
  return static_cast<double>(num / den);
}

/// True when the ray sits in the numerically treacherous band around a
/// degenerate kα for some harmonic order ≤ K.
inline bool near_degenerate(const BrokenRay& ray, int K) {
  for (int k = 1; k <= K; ++k) {
    double dist = dist_to_2pi_multiple(k * ray.alpha);
    if (dist >= kDegenerateTol && dist < kNearDegenerateTol) return true;
  }
  return false;
}

/// Residuals of the two sum identities
///   Σ_{l=1..n} cos(k(l-1/2)α) = S_k cos(k(κ-ι)/2)  (and sine analogue),
/// evaluated by direct long-double summation.
inline std::pair<double, double> s_sum_check(int k, const BrokenRay& ray) {
  long double cs = 0.0L, sn = 0.0L;
  long double twopi = 2.0L * std::numbers::pi_v<long double>;
  for (int l = 1; l <= ray.n; ++l) {
    long double arg = static_cast<long double>(k) *
                      (static_cast<long double>(l) - 0.5L) *
                      static_cast<long double>(ray.alpha);
    arg = std::remainder(arg, twopi);
    cs += std::cos(arg);
    sn += std::sin(arg);
  }
  long double half_diff = static_cast<long double>(k) *
                          (static_cast<long double>(ray.kappa) -
                           static_cast<long double>(ray.iota)) / 2.0L;
  half_diff = std::remainder(half_diff, twopi);
  long double sk = static_cast<long double>(s_coefficient(k, ray));
  double rc = static_cast<double>(std::fabs(cs - sk * std::cos(half_diff)));
  double rs = static_cast<double>(std::fabs(sn - sk * std::sin(half_diff)));
  return {rc, rs};
}

namespace detail {
inline const GaussLegendre& cached_rule(int order) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
  return it->second;
}
}  // namespace detail

/// Normalized mean of the field along the traced polyline, by composite
/// Gauss-Legendre on each segment.  This is the geometric oracle for the
/// harmonic formula below.
inline double brt_numeric(const FourierField& field, const BrokenRay& ray,
                          int samples_per_segment = 64) {
  if (samples_per_segment < 16)
    throw std::invalid_argument("brt_numeric: need >= 16 samples per segment");
  const auto& rule = detail::cached_rule(samples_per_segment);
  auto pts = trace(ray);
  // Near-center chords sweep the polar angle rapidly around the closest
  // approach, so each segment is integrated with composite panels.
  const int panels = 8;
  double total = 0.0;
  for (int s = 0; s < ray.n; ++s) {
    const Point& A = pts[s];
    const Point& B = pts[s + 1];
    double acc = integrate_panels(
        rule,
        [&](double t) {
          double x = A.x + t * (B.x - A.x);
          double y = A.y + t * (B.y - A.y);
          double r = std::hypot(x, y);
          if (r > 1.0) r = 1.0;
          return field.eval(r, std::atan2(y, x));
        },
        0.0, 1.0, panels);
    total += acc;  // per-segment mean; all segments share length d
  }
  return total / ray.n;
}

/// Closed-form broken ray transform of a band-limited field:
///   G f(γ) = (1/(n d)) Σ_{k=0..K} S_k(γ) [cos(kσ) A_k a_k(z)
///                                        + sin(kσ) A_k b_k(z)],
/// with σ = (ι+κ)/2.  The general-σ form follows from the axis-symmetric
/// case by rotating the field's coefficients; it is validated against
/// brt_numeric in the test suite before anything downstream trusts it.
inline double brt_analytic(const FourierField& field, const BrokenRay& ray) {
  double z = ray.z();
  double d = ray.d();
  double sigma = (ray.iota + ray.kappa) / 2.0;
  double total = s_coefficient(0, ray) * abel_forward_at(0, field.a(0), z);
  for (int k = 1; k <= field.K(); ++k) {
    double sk = s_coefficient(k, ray);
    if (sk == 0.0) continue;
    double ca = abel_forward_at(k, field.a(k), z);
    double cb = abel_forward_at(k, field.b(k), z);
    total += sk * (std::cos(k * sigma) * ca + std::sin(k * sigma) * cb);
  }
  return total / (ray.n * d);
}

/// A collection of (ray, measured value) pairs.  normalized = true means
/// mean values (G); false means raw integrals (G-tilde = mean * n * d).
struct Sinogram {
  struct Entry {
    BrokenRay ray;
    double value = 0.0;
  };
  std::vector<Entry> entries;
  bool normalized = true;
  std::uint64_t seed = 0;
  double sigma = 0.0;
};

/// Simulate measurements with the analytic path (numeric fallback for
/// very high band limits), optional i.i.d. Gaussian noise, and a
/// deterministic per-entry RNG stream derived from (seed, index).
inline Sinogram simulate(const FourierField& field,
                         const std::vector<BrokenRay>& rays, bool normalized,
                         std::optional<double> noise_sigma = std::nullopt,
                         std::uint64_t seed = 0, int threads = 1,
                         int numeric_threshold_K = 64) {
  Sinogram s;
  s.normalized = normalized;
  s.seed = seed;
  s.sigma = noise_sigma.value_or(0.0);
  s.entries.resize(rays.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const BrokenRay& ray = rays[i];
      double v = (field.K() <= numeric_threshold_K) ? brt_analytic(field, ray)
                                                    : brt_numeric(field, ray);
      if (!normalized) v *= ray.n * ray.d();
      if (noise_sigma && *noise_sigma > 0.0) {
        // Per-entry stream keyed by (seed, index): the result is
        // independent of the worker partition.
        std::mt19937_64 gen(seed + 0x9e3779b97f4a7c15ULL * (i + 1));
        std::normal_distribution<double> dist(0.0, *noise_sigma);
        v += dist(gen);
      }
      s.entries[i].ray = ray;
      s.entries[i].value = v;
    }
  };
  threads = std::max(1, threads);
  if (threads == 1 || rays.size() < 2 * static_cast<std::size_t>(threads)) {
    work(0, rays.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (rays.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = t * chunk;
      std::size_t hi = std::min(rays.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return s;
}

}  // namespace brt

#endif
