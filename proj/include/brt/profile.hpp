#ifndef BRT_PROFILE_HPP
#define BRT_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace brt {

/// A sampled function on [0,1]: uniform grid of N+1 nodes, evaluated in
/// between by piecewise-cubic Hermite interpolation with centered
/// difference slopes.  Immutable after construction.
class RadialProfile {
 public:
  RadialProfile() = default;

  RadialProfile(std::vector<double> grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    check_grid();
    build_slopes();
  }

  /// Uniform grid with N intervals, values from a callable.
  template <typename F>
  static RadialProfile sample(int N, F&& fn) {
    std::vector<double> g(N + 1), v(N + 1);
    for (int i = 0; i <= N; ++i) {
      g[i] = static_cast<double>(i) / N;
      v[i] = fn(g[i]);
    }
    return RadialProfile(std::move(g), std::move(v));
  }

  static RadialProfile zeros(int N) {
    return sample(N, [](double) { return 0.0; });
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  int intervals() const { return static_cast<int>(grid_.size()) - 1; }

  double operator()(double r) const {
    if (r < -1e-14 || r > 1.0 + 1e-14)
      throw std::domain_error("RadialProfile: radius out of [0,1]");
    r = std::clamp(r, 0.0, 1.0);
    const int n = intervals();
    // Uniform grid: index directly.
    int i = std::min(static_cast<int>(r * n), n - 1);
    double h = grid_[i + 1] - grid_[i];
    double t = (r - grid_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] +
           h11 * h * slopes_[i + 1];
  }

 private:
  void check_grid() {
    if (grid_.size() != values_.size())
      throw std::invalid_argument("RadialProfile: grid/value size mismatch");
    if (grid_.size() < 17)
      throw std::invalid_argument("RadialProfile: need at least 17 nodes (N >= 16)");
    if (std::abs(grid_.front()) > 1e-14 || std::abs(grid_.back() - 1.0) > 1e-14)
      throw std::invalid_argument("RadialProfile: grid must span [0,1]");
    const int n = intervals();
    for (int i = 0; i <= n; ++i) {
      double expect = static_cast<double>(i) / n;
      if (std::abs(grid_[i] - expect) > 1e-12)
        throw std::invalid_argument("RadialProfile: grid must be uniform");
    }
  }

  // Centered-difference cubic Hermite slopes (three-point one-sided at
  // the ends).  Crucially this makes evaluation *linear in the sampled
  // values*, so linear operations on fields (harmonic rotation, Abel
  // transforms of coefficient combinations) commute with interpolation
  // exactly; a monotone limiter would break those identities at the
  // 1e-5 level.
  void build_slopes() {
    const int n = intervals();
    slopes_.assign(n + 1, 0.0);
    double h = 1.0 / n;
    slopes_[0] = (-3.0 * values_[0] + 4.0 * values_[1] - values_[2]) / (2.0 * h);
    slopes_[n] =
        (3.0 * values_[n] - 4.0 * values_[n - 1] + values_[n - 2]) / (2.0 * h);
    for (int i = 1; i < n; ++i)
      slopes_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * h);
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Interpolate scattered (x, y) samples in [0,1] onto a uniform N-grid
/// using a monotone cubic through the scattered points.  Used to carry
/// per-ray measurements onto the reconstruction grid.
class ScatteredInterpolant {
 public:
  ScatteredInterpolant(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.size() < 3)
      throw std::invalid_argument("ScatteredInterpolant: need >= 3 samples");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("ScatteredInterpolant: abscissae must increase");
    build_slopes();
  }

  double operator()(double r) const {
    if (r <= x_.front()) {
      // Linear continuation with the first slope.
      return y_.front() + s_.front() * (r - x_.front());
    }
    if (r >= x_.back()) {
      return y_.back() + s_.back() * (r - x_.back());
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), r);
    std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    double h = x_[i + 1] - x_[i];
    double t = (r - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1;
    double h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2;
    double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * s_[i] + h01 * y_[i + 1] + h11 * h * s_[i + 1];
  }

 private:
  void build_slopes() {
    const std::size_t n = x_.size() - 1;
    s_.assign(n + 1, 0.0);
    std::vector<double> delta(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    s_[0] = delta[0];
    s_[n] = delta[n - 1];
    for (std::size_t i = 1; i < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0)
        s_[i] = 0.0;
      else {
        double w1 = 2.0 * h[i] + h[i - 1];
        double w2 = h[i] + 2.0 * h[i - 1];
        s_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
  }

  std::vector<double> x_, y_, s_;
};

}  // namespace brt

#endif
