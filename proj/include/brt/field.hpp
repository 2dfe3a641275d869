#ifndef BRT_FIELD_HPP
#define BRT_FIELD_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brt/geometry.hpp"
#include "brt/profile.hpp"

namespace brt {

/// Band-limited function on the disk:
///   f(r, theta) = a0(r) + sum_{k=1..K} a_k(r) cos(k theta) + b_k(r) sin(k theta)
/// with each coefficient a sampled RadialProfile on a shared uniform grid.
/// The a_k, b_k (k >= 1) must vanish at the origin for continuity.
class FourierField {
 public:
  FourierField(int K, std::vector<RadialProfile> a, std::vector<RadialProfile> b)
      : K_(K), a_(std::move(a)), b_(std::move(b)) {
    if (K_ < 0) throw std::invalid_argument("FourierField: band limit must be >= 0");
    if (a_.size() != static_cast<std::size_t>(K_) + 1)
      throw std::invalid_argument("FourierField: need K+1 cosine profiles");
    if (b_.size() != static_cast<std::size_t>(K_))
      throw std::invalid_argument("FourierField: need K sine profiles");
    const int n = a_[0].intervals();
    for (const auto& p : a_)
      if (p.intervals() != n)
        throw std::invalid_argument("FourierField: profiles must share one grid");
    for (const auto& p : b_)
      if (p.intervals() != n)
        throw std::invalid_argument("FourierField: profiles must share one grid");
    for (int k = 1; k <= K_; ++k) {
      if (std::abs(a_[k].values().front()) > 1e-9 ||
          std::abs(b_[k - 1].values().front()) > 1e-9)
        throw std::invalid_argument(
            "FourierField: harmonic profiles must vanish at the origin");
    }
  }

  int K() const { return K_; }
  int intervals() const { return a_[0].intervals(); }
  const std::vector<double>& grid() const { return a_[0].grid(); }

  const RadialProfile& a(int k) const { return a_.at(k); }
  const RadialProfile& b(int k) const {
    if (k < 1) throw std::invalid_argument("FourierField: sine index starts at 1");
    return b_.at(k - 1);
  }

  double eval(double r, double theta) const {
    if (r < -1e-14 || r > 1.0 + 1e-14)
      throw std::domain_error("FourierField: radius out of [0,1]");
    // Reduce the angle so periodicity holds exactly for representable
    // multiples of 2*pi.
    theta = std::remainder(theta, kTwoPi);
    double s = a_[0](r);
    for (int k = 1; k <= K_; ++k)
      s += a_[k](r) * std::cos(k * theta) + b_[k - 1](r) * std::sin(k * theta);
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    const int n = intervals();
    for (int i = 0; i <= n; ++i) {
      double r = grid()[i];
      for (int j = 0; j < 256; ++j) {
        double th = kTwoPi * j / 256.0;
        m = std::max(m, std::abs(eval(r, th)));
      }
    }
    return m;
  }

  /// Field with coefficients rotated so that eval'(r, theta) =
  /// eval(r, theta + phi).
  FourierField rotate(double phi) const {
    std::vector<RadialProfile> na(a_), nb(b_);
    const int n = intervals();
    for (int k = 1; k <= K_; ++k) {
      double c = std::cos(k * phi), s = std::sin(k * phi);
      std::vector<double> av(n + 1), bv(n + 1);
      for (int i = 0; i <= n; ++i) {
        double ak = a_[k].values()[i], bk = b_[k - 1].values()[i];
        av[i] = ak * c + bk * s;
        bv[i] = -ak * s + bk * c;
      }
      na[k] = RadialProfile(grid(), std::move(av));
      nb[k - 1] = RadialProfile(grid(), std::move(bv));
    }
    return FourierField(K_, std::move(na), std::move(nb));
  }

 private:
  int K_;
  std::vector<RadialProfile> a_;
  std::vector<RadialProfile> b_;
};

/// Discrete Fourier projection of pointwise samples onto a band-limited
/// field: a_k(r) = (1/pi) * integral of f(r, .) cos(k .), by the uniform
/// trapezoid rule, which is exact for band limits <= K when the angular
/// count M >= 4K+4.
inline FourierField project(const std::function<double(double, double)>& f,
                            int K, int N, int M) {
  if (M < 4 * K + 4)
    throw std::invalid_argument("project: need at least 4K+4 angular samples");
  std::vector<RadialProfile> a, b;
  std::vector<std::vector<double>> av(K + 1, std::vector<double>(N + 1, 0.0));
  std::vector<std::vector<double>> bv(K, std::vector<double>(N + 1, 0.0));
  std::vector<double> grid(N + 1);
  for (int i = 0; i <= N; ++i) {
    double r = static_cast<double>(i) / N;
    grid[i] = r;
    std::vector<double> samples(M);
    for (int j = 0; j < M; ++j) samples[j] = f(r, kTwoPi * j / M);
    for (int k = 0; k <= K; ++k) {
      double ca = 0.0, cb = 0.0;
      for (int j = 0; j < M; ++j) {
        double th = kTwoPi * j / M;
        ca += samples[j] * std::cos(k * th);
        cb += samples[j] * std::sin(k * th);
      }
      av[k][i] = (k == 0 ? 1.0 : 2.0) * ca / M;
      if (k >= 1) bv[k - 1][i] = 2.0 * cb / M;
    }
  }
  // Clamp origin values of the harmonics: they vanish for continuous
  // fields and the projection only leaves roundoff there.
  for (int k = 1; k <= K; ++k) {
    if (std::abs(av[k][0]) < 1e-9) av[k][0] = 0.0;
    if (std::abs(bv[k - 1][0]) < 1e-9) bv[k - 1][0] = 0.0;
  }
  for (int k = 0; k <= K; ++k) a.emplace_back(grid, std::move(av[k]));
  for (int k = 1; k <= K; ++k) b.emplace_back(grid, std::move(bv[k - 1]));
  return FourierField(K, std::move(a), std::move(b));
}

/// Deterministic test fields.
inline FourierField phantom(const std::string& name, int N = 512) {
  auto zero = RadialProfile::zeros(N);
  if (name == "uniform") {
    std::vector<RadialProfile> a{RadialProfile::sample(N, [](double) { return 1.0; })};
    return FourierField(0, std::move(a), {});
  }
  if (name == "ring") {
    std::vector<RadialProfile> a{RadialProfile::sample(N, [](double r) {
      double t = (r - 0.6) / 0.15;
      return std::exp(-t * t);
    })};
    return FourierField(0, std::move(a), {});
  }
  if (name == "offcenter-K8") {
    // Band-limited Gaussian blob at (r0, th0): the harmonics of
    // exp(-|x - x0|^2 / s^2) carry modified Bessel factors, which vanish
    // at the origin for k >= 1 as required.
    const int K = 8;
    const double r0 = 0.45, th0 = 0.7, s2 = 0.3 * 0.3;
    std::vector<RadialProfile> a, b;
    for (int k = 0; k <= K; ++k) {
      a.push_back(RadialProfile::sample(N, [=](double r) {
        double eps = (k == 0) ? 1.0 : 2.0;
        double bess = std::cyl_bessel_i(k, 2.0 * r * r0 / s2);
        return eps * std::exp(-(r * r + r0 * r0) / s2) * bess * std::cos(k * th0);
      }));
    }
    for (int k = 1; k <= K; ++k) {
      b.push_back(RadialProfile::sample(N, [=](double r) {
        double bess = std::cyl_bessel_i(k, 2.0 * r * r0 / s2);
        return 2.0 * std::exp(-(r * r + r0 * r0) / s2) * bess * std::sin(k * th0);
      }));
    }
    return FourierField(K, std::move(a), std::move(b));
  }
  if (name == "antisym") {
    // Sine-only field: eval(r, -theta) = -eval(r, theta).
    std::vector<RadialProfile> a(4, zero);
    std::vector<RadialProfile> b;
    b.push_back(RadialProfile::sample(N, [](double r) { return r * (1.0 - r); }));
    b.push_back(RadialProfile::sample(N, [](double r) { return 0.5 * r * r * (1.0 - r); }));
    b.push_back(RadialProfile::sample(N, [](double r) { return 0.3 * std::sin(M_PI * r) * r; }));
    return FourierField(3, std::move(a), std::move(b));
  }
  throw std::invalid_argument("phantom: unknown name '" + name + "'");
}

}  // namespace brt

#endif
