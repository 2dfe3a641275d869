#ifndef BRT_QUADRATURE_HPP
#define BRT_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace brt {

/// Gauss-Legendre rule on [-1,1], nodes and weights computed by Newton
/// iteration on the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int order) {
    if (order < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
    nodes.resize(order);
    weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
      // Chebyshev-point initial guess for the i-th positive root.
      double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < order; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = order * (x * p0 - p1) / (x * x - 1.0);
        double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[order - 1 - i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
      weights[order - 1 - i] = weights[i];
    }
  }
};

/// Integrate fn over [a,b] with `panels` equal panels of the given rule.
template <typename F>
double integrate_panels(const GaussLegendre& rule, F&& fn, double a, double b,
                        int panels) {
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    const double mid = lo + 0.5 * w;
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      s += rule.weights[q] * fn(mid + 0.5 * w * rule.nodes[q]);
    total += 0.5 * w * s;
  }
  return total;
}

/// Shared fixed-order rule used by the singular-integral substitutions.
inline const GaussLegendre& default_rule() {
  static const GaussLegendre rule(32);
  return rule;
}

inline constexpr int kDefaultPanels = 8;

}  // namespace brt

#endif
