#ifndef BRT_CHEBYSHEV_HPP
#define BRT_CHEBYSHEV_HPP

#include <cmath>
#include <stdexcept>

namespace brt {

/// T_k(x) through the trigonometric/hyperbolic form, valid for x >= -1.
/// Stays stable for large k and for arguments above 1 where the monomial
/// expansion overflows its significance.
inline double chebyshev(int k, double x) {
  if (k < 0) throw std::invalid_argument("chebyshev: order must be >= 0");
  if (x < -1.0) throw std::domain_error("chebyshev: argument below -1");
  if (x <= 1.0) return std::cos(k * std::acos(x));
  return std::cosh(k * std::acosh(x));
}

}  // namespace brt

#endif
