#ifndef BRT_ABEL_HPP
#define BRT_ABEL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brt/chebyshev.hpp"
#include "brt/profile.hpp"
#include "brt/quadrature.hpp"

namespace brt {

/// A_k f(z) = 2 * integral_z^1 T_k(z/y) f(y) / sqrt(1 - (z/y)^2) dy.
/// The square-root singularity at y = z is removed by the substitution
/// y = z/cos(phi) followed by the reparameterization
/// tan(phi) = t sqrt(1-z^2)/z, i.e. y(t) = sqrt(z^2 + (1-z^2) t^2):
///   A_k f(z) = 2 sqrt(1-z^2) * integral_0^1 T_k(z/y(t)) f(y(t)) dt,
/// whose integrand is smooth and bounded uniformly in z (at z = 0 it
/// degenerates to 2 cos(k pi/2) * int_0^1 f, the raw integral's value).
template <typename F>
double abel_forward_at(int k, F&& f, double z) {
  if (k < 0) throw std::invalid_argument("abel_forward_at: order must be >= 0");
  if (z < 0.0 || z > 1.0) throw std::domain_error("abel_forward_at: z out of [0,1]");
  const auto& rule = default_rule();
  if (z >= 1.0) return 0.0;
  if (k % 2 == 1 && z == 0.0) return 0.0;  // T_k(0) = 0 for odd k
  const double w2 = 1.0 - z * z;
  return integrate_panels(
      rule,
      [&](double t) {
        double y = std::sqrt(z * z + w2 * t * t);
        double x = (y > 0.0) ? std::min(z / y, 1.0) : 1.0;
        return 2.0 * std::sqrt(w2) * chebyshev(k, x) * f(y);
      },
      0.0, 1.0, kDefaultPanels);
}

void hermite_weights(int N, double r, std::vector<std::pair<int, double>>& out);

/// Evaluate the linear-in-data cubic Hermite interpolant (centered
/// slopes) of uniform-grid samples.  This is the rule shared by
/// abel_forward and abel_matrix so the two code paths discretize the same
/// operator.
inline double hermite_eval(const std::vector<double>& values, double r) {
  const int N = static_cast<int>(values.size()) - 1;
  static thread_local std::vector<std::pair<int, double>> w;
  hermite_weights(N, r, w);
  double s = 0.0;
  for (const auto& p : w) s += p.second * values[p.first];
  return s;
}

/// Forward transform sampled on the profile's own grid.
inline RadialProfile abel_forward(int k, const RadialProfile& f) {
  if (k >= 1 && std::abs(f(0.0)) > 1e-10)
    throw std::invalid_argument("abel_forward: k >= 1 requires f(0) = 0");
  const int N = f.intervals();
  const std::vector<double>& data = f.values();
  auto eval = [&](double y) { return hermite_eval(data, y); };
  std::vector<double> vals(N + 1);
  for (int i = 0; i <= N; ++i) {
    double z = f.grid()[i];
    vals[i] = (i == N) ? 0.0 : abel_forward_at(k, eval, z);
  }
  return RadialProfile(f.grid(), std::move(vals));
}

/// Interpolation weights of a linear-in-data cubic Hermite scheme on the
/// uniform N-grid: value at r is a fixed linear combination of at most
/// four node values (centered-difference slopes inside, one-sided
/// three-point slopes at the ends).  Keeping the scheme linear makes the
/// discrete operator below a genuine matrix.
inline void hermite_weights(int N, double r, std::vector<std::pair<int, double>>& out) {
  out.clear();
  r = std::clamp(r, 0.0, 1.0);
  int i = std::min(static_cast<int>(r * N), N - 1);
  double h = 1.0 / N;
  double t = (r - static_cast<double>(i) / N) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1;
  double h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2;
  double h11 = t3 - t2;
  auto add = [&](int idx, double w) {
    if (w == 0.0) return;
    for (auto& p : out)
      if (p.first == idx) { p.second += w; return; }
    out.emplace_back(idx, w);
  };
  add(i, h00);
  add(i + 1, h01);
  // slope at node i (times h)
  auto add_slope = [&](int node, double w) {
    if (w == 0.0) return;
    if (node == 0) {
      add(0, -1.5 * w);
      add(1, 2.0 * w);
      add(2, -0.5 * w);
    } else if (node == N) {
      add(N, 1.5 * w);
      add(N - 1, -2.0 * w);
      add(N - 2, 0.5 * w);
    } else {
      add(node - 1, -0.5 * w);
      add(node + 1, 0.5 * w);
    }
  };
  add_slope(i, h10);
  add_slope(i + 1, h11);
}

/// Dense discretization of A_k on the uniform (N+1)-node grid, using the
/// same substitution quadrature as abel_forward but with the linear
/// Hermite interpolation above in place of the monotone rule.
inline Eigen::MatrixXd abel_matrix(int k, int N) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
  const auto& rule = default_rule();
  std::vector<std::pair<int, double>> w;
  auto accumulate = [&](int row, double y, double factor) {
    hermite_weights(N, y, w);
    for (const auto& p : w) M(row, p.first) += factor * p.second;
  };
  for (int i = 0; i < N; ++i) {
    double z = static_cast<double>(i) / N;
    if (k % 2 == 1 && z == 0.0) continue;
    const double w2 = 1.0 - z * z;
    double width = 1.0 / kDefaultPanels;
    for (int p = 0; p < kDefaultPanels; ++p) {
      double mid = (p + 0.5) * width;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double t = mid + 0.5 * width * rule.nodes[q];
        double y = std::sqrt(z * z + w2 * t * t);
        double x = (y > 0.0) ? std::min(z / y, 1.0) : 1.0;
        double factor = 0.5 * width * rule.weights[q] * 2.0 * std::sqrt(w2) *
                        chebyshev(k, x);
        accumulate(i, y, factor);
      }
    }
  }
  // Last row (z = 1): the integral is over an empty interval.
  return M;
}

/// Sup over grid rows of the total absolute quadrature weight, measured
/// before interpolation spreads it over nodes; this discretizes the
/// operator norm and must not exceed 2.
inline double abel_operator_norm(int k, int N) {
  const auto& rule = default_rule();
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    double z = static_cast<double>(i) / N;
    double row = 0.0;
    const double w2 = 1.0 - z * z;
    double width = 1.0 / kDefaultPanels;
    for (int p = 0; p < kDefaultPanels; ++p) {
      double mid = (p + 0.5) * width;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double t = mid + 0.5 * width * rule.nodes[q];
        double y = std::sqrt(z * z + w2 * t * t);
        double x = (y > 0.0) ? std::min(z / y, 1.0) : 1.0;
        row += 0.5 * width * rule.weights[q] *
               std::abs(2.0 * std::sqrt(w2) * chebyshev(k, x));
      }
    }
    worst = std::max(worst, row);
  }
  return worst;
}

/// Regularized inverse: solve min ||M x - h||^2 + lambda ||D2 x||^2 with
/// D2 the second-difference operator, lambda scaled by the largest
/// singular value of M.  This path is stable for all orders and for noisy
/// data; the explicit formula below is kept as an independent cross-check.
inline RadialProfile abel_inverse(int k, const RadialProfile& h,
                                  double lambda_scale = 1e-6) {
  const int N = h.intervals();
  Eigen::MatrixXd M = abel_matrix(k, N);
  Eigen::VectorXd rhs(N + 1);
  for (int i = 0; i <= N; ++i) rhs(i) = h.values()[i];
  Eigen::MatrixXd MtM = M.transpose() * M;
  // Largest eigenvalue of M^T M (= sigma_1^2) by power iteration.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(N + 1).normalized();
  double sigma2 = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd u = MtM * v;
    double nn = u.norm();
    if (nn == 0.0) break;
    u /= nn;
    if (std::abs(nn - sigma2) < 1e-12 * std::max(1.0, sigma2)) { sigma2 = nn; break; }
    sigma2 = nn;
    v = u;
  }
  double lambda = lambda_scale * sigma2;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N - 1, N + 1);
  for (int i = 0; i < N - 1; ++i) {
    D(i, i) = 1.0;
    D(i, i + 1) = -2.0;
    D(i, i + 2) = 1.0;
  }
  Eigen::MatrixXd A = MtM + lambda * D.transpose() * D;
  Eigen::VectorXd x = A.ldlt().solve(M.transpose() * rhs);
  std::vector<double> vals(N + 1);
  for (int i = 0; i <= N; ++i) vals[i] = x(i);
  return RadialProfile(h.grid(), std::move(vals));
}

/// Explicit inversion formula
///   f(y) = -(1/pi) d/dy integral_y^1 T_k(z/y) h(z) / (z sqrt((z/y)^2-1)) dz,
/// with the inner integral computed after z = y/cos(psi):
///   F(y) = integral_0^{arccos y} T_k(1/cos psi) h(y/cos psi) dpsi
/// and the outer derivative by grid-spacing central differences
/// (one-sided at the ends).  Exact but derivative-amplified; used as a
/// cross-check on smooth low-order data.
inline RadialProfile abel_inverse_explicit(int k, const RadialProfile& h) {
  const int N = h.intervals();
  const auto& rule = default_rule();
  auto F = [&](double y) {
    if (y >= 1.0) return 0.0;
    if (y <= 0.0) y = 1e-12;
    double psimax = std::acos(y);
    return integrate_panels(
        rule,
        [&](double psi) {
          double c = std::cos(psi);
          return chebyshev(k, 1.0 / c) * h(y / c);
        },
        0.0, psimax, kDefaultPanels);
  };
  double dh = 1.0 / N;
  std::vector<double> vals(N + 1);
  std::vector<double> Fv(N + 1);
  for (int i = 0; i <= N; ++i) Fv[i] = F(static_cast<double>(i) / N);
  for (int i = 0; i <= N; ++i) {
    double deriv;
    if (i == 0)
      deriv = (-3.0 * Fv[0] + 4.0 * Fv[1] - Fv[2]) / (2.0 * dh);
    else if (i == N)
      deriv = (3.0 * Fv[N] - 4.0 * Fv[N - 1] + Fv[N - 2]) / (2.0 * dh);
    else
      deriv = (Fv[i + 1] - Fv[i - 1]) / (2.0 * dh);
    vals[i] = -deriv / M_PI;
  }
  return RadialProfile(h.grid(), std::move(vals));
}

/// The Radon-transform relation behind the Abel transforms: the line
/// integral of f(r) cos(k theta) over the chord {x . (cos phi, sin phi)
/// = rho} equals A_k f(rho) cos(k phi).  Returns both sides.
inline std::pair<double, double> radon_chord_check(int k, const RadialProfile& f,
                                                   double rho, double phi) {
  if (rho < 0.0 || rho >= 1.0)
    throw std::domain_error("radon_chord_check: rho out of [0,1)");
  const auto& rule = default_rule();
  double L = std::sqrt(1.0 - rho * rho);
  double ux = std::cos(phi), uy = std::sin(phi);
  double direct = integrate_panels(
      rule,
      [&](double t) {
        double x = rho * ux - t * uy;
        double y = rho * uy + t * ux;
        double r = std::hypot(x, y);
        double theta = std::atan2(y, x);
        double fr = (r <= 1.0) ? f(r) : 0.0;
        return fr * std::cos(k * theta);
      },
      -L, L, kDefaultPanels);
  double analytic = abel_forward_at(k, f, rho) * std::cos(k * phi);
  return {direct, analytic};
}

}  // namespace brt

#endif
