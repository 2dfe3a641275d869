#ifndef BRT_RECONSTRUCT_HPP
#define BRT_RECONSTRUCT_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <tuple>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brt/abel.hpp"
#include "brt/field.hpp"
#include "brt/forward.hpp"
#include "brt/geometry.hpp"
#include "brt/profile.hpp"

namespace brt {

/// p_z(r) = ((1-z^2)(1-z^2/r^2))^{-1/2}: the limiting distribution of the
/// distance from the origin to a long trajectory's points, supported on
/// (z, 1] and integrating to 1.
inline double p_density(double z, double r) {
  if (!(z > 0.0 && z < 1.0)) throw std::domain_error("p_density: z out of (0,1)");
  if (!(r > z && r <= 1.0)) throw std::domain_error("p_density: need z < r <= 1");
  return 1.0 / std::sqrt((1.0 - z * z) * (1.0 - (z * z) / (r * r)));
}

/// Weighted average g(z) = int_z^1 p_z(r) f(r) dr via the substitution
/// r = z/cos(u), which removes the endpoint singularity; equal to
/// A_0 f(z) / (2 sqrt(1-z^2)).
template <typename F>
double g_average(double z, F&& f) {
  return abel_forward_at(0, f, z) / (2.0 * std::sqrt(1.0 - z * z));
}

/// Reconstruction plan for singleton tomography: for each target chord
/// distance, the closed coprime orbit (n, m), n >= n_min, whose
/// z = cos(pi m / n) is nearest the target.
struct SingletonPlan {
  double point = 0.0;
  int n_min = 512;
  std::vector<double> targets;     // requested z values
  std::vector<BrokenRay> rays;     // chosen ray per target
};

inline SingletonPlan make_singleton_plan(double point, int n_min,
                                         const std::vector<double>& targets,
                                         int n_window = 64) {
  SingletonPlan plan;
  plan.point = point;
  plan.n_min = n_min;
  plan.targets = targets;
  for (double zt : targets) {
    double best_err = 1e300;
    int best_n = 0, best_m = 0;
    for (int n = n_min; n < n_min + n_window; ++n) {
      for (int m = 1; 2 * m < n; ++m) {
        if (std::gcd(n, m) != 1) continue;
        double z = std::cos(M_PI * m / n);
        double err = std::abs(z - zt);
        if (err < best_err) {
          best_err = err;
          best_n = n;
          best_m = m;
        }
      }
    }
    if (best_n == 0)
      throw std::runtime_error("make_singleton_plan: no coprime orbit found");
    BrokenRay ray;
    ray.n = best_n;
    ray.m = best_m;
    ray.alpha = kTwoPi * best_m / best_n;
    ray.iota = point;
    ray.kappa = point;
    ray.validate();
    plan.rays.push_back(ray);
  }
  return plan;
}

/// Singleton pipeline: treat each normalized measurement as g(z_ray),
/// form A_0 a_0(z) = 2 sqrt(1-z^2) g(z), carry the scattered samples onto
/// the uniform grid (pinning the known boundary value 0 at z = 1), and
/// apply the regularized Abel inverse.
inline RadialProfile reconstruct_a0_singleton(const Sinogram& data,
                                              const SingletonPlan& plan,
                                              int N = 512) {
  if (!data.normalized)
    throw std::invalid_argument("reconstruct_a0_singleton: need normalized data");
  if (data.entries.size() != plan.rays.size())
    throw std::invalid_argument("reconstruct_a0_singleton: data/plan size mismatch");
  // Interpolate g(z) itself -- it is smooth up to z = 1 -- and reattach
  // the exact 2*sqrt(1-z^2) factor afterwards, so the square-root
  // boundary behaviour of A_0 a_0 never has to be interpolated.
  std::map<double, double> samples;  // z -> g(z), deduplicated
  for (std::size_t i = 0; i < plan.rays.size(); ++i)
    samples[plan.rays[i].z()] = data.entries[i].value;
  std::vector<double> xs, ys;
  for (const auto& [z, v] : samples) {
    xs.push_back(z);
    ys.push_back(v);
  }
  if (xs.size() < 3)
    throw std::runtime_error("reconstruct_a0_singleton: too few distinct chords");
  ScatteredInterpolant interp(std::move(xs), std::move(ys));
  auto h = RadialProfile::sample(N, [&](double z) {
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - z * z)) * interp(z);
  });
  return abel_inverse(0, h);
}

/// Reconstruction plan for an open set of tomography: one or two symmetry
/// axes inside E, and for each (axis, z target) the admissible family of
/// symmetric rays.
struct OpenSetPlan {
  TomographySet E;
  int K = 0;
  std::vector<double> axes;                       // 1 or 2 angles in E
  std::vector<double> zs;                         // target chord distances
  int n_max = 2000;
  double lambda_scale = 1e-8;
  /// Families whose (scaled) design matrix exceeds this condition number
  /// are dropped: at chord distances where alpha is a rational multiple
  /// of 2*pi with small denominator (e.g. z = 1/2, alpha = 2*pi/3) the
  /// offsets beta_n cycle through finitely many values and harmonic
  /// columns become collinear.  The smooth c_k(z) are filled in from the
  /// neighbouring well-posed chords.
  double cond_max = 1e8;
  std::vector<std::vector<std::vector<BrokenRay>>> rays;  // [axis][z][j]
};

inline OpenSetPlan make_open_plan(const TomographySet& E, int K, int grid_N,
                                  int n_max = 2000, int num_axes = 2,
                                  double z_max = 0.98,
                                  std::vector<double> axes_override = {}) {
  if (E.singleton)
    throw std::invalid_argument("make_open_plan: E must be open");
  if (num_axes < 1 || num_axes > 2)
    throw std::invalid_argument("make_open_plan: need 1 or 2 axes");
  OpenSetPlan plan;
  plan.E = E;
  plan.K = K;
  plan.n_max = n_max;
  if (!axes_override.empty()) {
    plan.axes = std::move(axes_override);
    for (double phi : plan.axes)
      if (!E.contains(phi))
        throw std::invalid_argument("make_open_plan: axis outside E");
  } else {
    double lo = E.arcs.front().lo, hi = E.arcs.front().hi;
    double width = hi - lo;
    plan.axes.push_back(lo + width / 3.0);
    if (num_axes == 2) plan.axes.push_back(lo + 2.0 * width / 3.0);
  }
  if (plan.axes.size() == 2) {
    double dphi = plan.axes[1] - plan.axes[0];
    for (int k = 1; k <= K; ++k) {
      double dist = std::abs(std::remainder(k * dphi, M_PI));
      if (dist < 1e-6)
        throw std::invalid_argument("make_open_plan: axis pair resonant for some k <= K");
    }
  }
  for (int i = 1; i <= grid_N; ++i) {
    double z = static_cast<double>(i) / grid_N;
    if (z > z_max) break;
    plan.zs.push_back(z);
  }
  plan.rays.resize(plan.axes.size());
  for (std::size_t a = 0; a < plan.axes.size(); ++a) {
    plan.rays[a].resize(plan.zs.size());
    for (std::size_t zi = 0; zi < plan.zs.size(); ++zi) {
      auto fam = enumerate_symmetric_rays(E, plan.axes[a], plan.zs[zi], n_max);
      std::vector<BrokenRay> keep;
      for (const auto& r : fam)
        if (!near_degenerate(r, K)) keep.push_back(r);
      plan.rays[a][zi] = std::move(keep);
    }
  }
  return plan;
}

struct OpenSetSolveInfo {
  std::size_t axis = 0;
  double z = 0.0;
  int rays_used = 0;
  double cond = 0.0;       // condition number of the scaled design matrix
  double residual = 0.0;   // least-squares residual norm
};

struct OpenSetReport {
  std::vector<OpenSetSolveInfo> solves;
  double max_cond = 0.0;        // over the solves actually used
  int excluded_chords = 0;      // chord distances dropped for conditioning
};

/// Harmonic separation from an open boundary set: for each
/// axis phi and chord distance z, the raw measurements over the symmetric
/// ray family satisfy
///   Gtilde_j = sum_{k=0..K} S_k(gamma_j) c_k(phi, z),
///   c_k(phi, z) = cos(k phi) A_k a_k(z) + sin(k phi) A_k b_k(z).
/// Solve each family by column-scaled Tikhonov least squares, separate
/// (A_k a_k, A_k b_k) across the two axes, and finish with the
/// regularized Abel inverse per harmonic.  measure returns the
/// *normalized* transform G f(gamma); throws on rank-deficient families.
inline FourierField reconstruct_open(
    const std::function<double(const BrokenRay&)>& measure,
    const OpenSetPlan& plan, int N, OpenSetReport* report = nullptr) {
  const int K = plan.K;
  const std::size_t A = plan.axes.size();
  const std::size_t Z = plan.zs.size();
  // c[axis][k][zi]
  std::vector<std::vector<std::vector<double>>> c(
      A, std::vector<std::vector<double>>(K + 1, std::vector<double>(Z, 0.0)));
  std::vector<char> keep(Z, 1);  // shared across axes: cond depends on z only
  OpenSetReport local;
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t zi = 0; zi < Z; ++zi) {
      if (!keep[zi]) continue;
      const auto& fam = plan.rays[a][zi];
      const int rows = static_cast<int>(fam.size());
      if (rows < K + 2) {
        std::ostringstream os;
        os << "reconstruct_open: rank-deficient family at axis " << plan.axes[a]
           << ", z = " << plan.zs[zi] << " (have " << rows << " rays, need "
           << (K + 2) << ")";
        throw std::runtime_error(os.str());
      }
      Eigen::MatrixXd S(rows, K + 1);
      Eigen::VectorXd rhs(rows);
      for (int j = 0; j < rows; ++j) {
        const BrokenRay& ray = fam[j];
        for (int k = 0; k <= K; ++k) S(j, k) = s_coefficient(k, ray);
        rhs(j) = measure(ray) * ray.n * ray.d();  // raw transform
      }
      // Column scaling equilibrates the widely different S_k magnitudes.
      Eigen::VectorXd scale(K + 1);
      for (int k = 0; k <= K; ++k) {
        double nn = S.col(k).norm();
        scale(k) = (nn > 0.0) ? 1.0 / nn : 1.0;
      }
      Eigen::MatrixXd Ss = S * scale.asDiagonal();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ss, Eigen::ComputeThinU |
                                                    Eigen::ComputeThinV);
      double s1 = svd.singularValues()(0);
      double sK = svd.singularValues()(K);
      double cond = (sK > 0.0) ? s1 / sK : std::numeric_limits<double>::infinity();
      if (cond > plan.cond_max) {
        keep[zi] = 0;
        continue;
      }
      // Tikhonov in the scaled variables via the SVD.
      double lambda = plan.lambda_scale * s1 * s1;
      Eigen::VectorXd beta = svd.matrixU().transpose() * rhs;
      Eigen::VectorXd y(K + 1);
      for (int k = 0; k <= K; ++k) {
        double sv = svd.singularValues()(k);
        y(k) = sv * beta(k) / (sv * sv + lambda);
      }
      Eigen::VectorXd x = scale.asDiagonal() * (svd.matrixV() * y);
      for (int k = 0; k <= K; ++k) c[a][k][zi] = x(k);
      OpenSetSolveInfo info;
      info.axis = a;
      info.z = plan.zs[zi];
      info.rays_used = rows;
      info.cond = cond;
      info.residual = (S * x - rhs).norm();
      local.max_cond = std::max(local.max_cond, cond);
      local.solves.push_back(info);
    }
  }
  // Separate cosine/sine Abel images across axes, per harmonic and z.
  std::vector<std::vector<double>> Aa(K + 1, std::vector<double>(Z, 0.0));
  std::vector<std::vector<double>> Ab(K + 1, std::vector<double>(Z, 0.0));
  for (int k = 0; k <= K; ++k) {
    if (k == 0) {
      for (std::size_t zi = 0; zi < Z; ++zi) {
        if (!keep[zi]) continue;
        double v = 0.0;
        for (std::size_t a = 0; a < A; ++a) v += c[a][0][zi];
        Aa[0][zi] = v / static_cast<double>(A);
      }
      continue;
    }
    if (A == 1) {
      // Single-axis mode assumes a sine-free field about this axis.
      double cphi = std::cos(k * plan.axes[0]);
      if (std::abs(cphi) < 1e-9)
        throw std::runtime_error("reconstruct_open: single axis blind to harmonic");
      for (std::size_t zi = 0; zi < Z; ++zi)
        if (keep[zi]) Aa[k][zi] = c[0][k][zi] / cphi;
      continue;
    }
    double c1 = std::cos(k * plan.axes[0]), s1 = std::sin(k * plan.axes[0]);
    double c2 = std::cos(k * plan.axes[1]), s2 = std::sin(k * plan.axes[1]);
    double det = c1 * s2 - s1 * c2;  // = sin(k (phi2 - phi1))
    if (std::abs(det) < 1e-9)
      throw std::runtime_error("reconstruct_open: singular axis pair for harmonic");
    for (std::size_t zi = 0; zi < Z; ++zi) {
      if (!keep[zi]) continue;
      Aa[k][zi] = (s2 * c[0][k][zi] - s1 * c[1][k][zi]) / det;
      Ab[k][zi] = (-c2 * c[0][k][zi] + c1 * c[1][k][zi]) / det;
    }
  }
  std::size_t kept = 0;
  for (std::size_t zi = 0; zi < Z; ++zi) kept += keep[zi] ? 1 : 0;
  local.excluded_chords = static_cast<int>(Z - kept);
  if (kept < 8)
    throw std::runtime_error(
        "reconstruct_open: too few well-conditioned chord distances");
  // Carry each Abel image onto the uniform grid and invert.  The smooth
  // quotient A_k(z) / (2 sqrt(1-z^2)) is what gets interpolated; the
  // square-root factor is reattached exactly, so the image vanishes at
  // z = 1 by construction.
  auto invert = [&](int k, const std::vector<double>& vals) {
    std::vector<double> xs, ys;
    xs.push_back(0.0);
    ys.push_back(0.0);  // overwritten below once the first sample is known
    for (std::size_t zi = 0; zi < Z; ++zi) {
      if (!keep[zi]) continue;
      double z = plan.zs[zi];
      xs.push_back(z);
      ys.push_back(vals[zi] / (2.0 * std::sqrt(1.0 - z * z)));
    }
    // Continuity toward z = 0: odd harmonics vanish there.
    ys[0] = (k % 2 == 1) ? 0.0 : ys[1];
    ScatteredInterpolant interp(std::move(xs), std::move(ys));
    auto h = RadialProfile::sample(N, [&](double z) {
      return 2.0 * std::sqrt(std::max(0.0, 1.0 - z * z)) * interp(z);
    });
    auto f = abel_inverse(k, h);
    if (k >= 1) {
      // Enforce the exact origin constraint of the harmonics.
      std::vector<double> fv = f.values();
      fv[0] = 0.0;
      f = RadialProfile(f.grid(), std::move(fv));
    }
    return f;
  };
  std::vector<RadialProfile> a, b;
  for (int k = 0; k <= K; ++k) a.push_back(invert(k, Aa[k]));
  for (int k = 1; k <= K; ++k) b.push_back(invert(k, Ab[k]));
  if (report) *report = std::move(local);
  return FourierField(K, std::move(a), std::move(b));
}

/// Wrap a sinogram as a measurement function for reconstruct_open;
/// missing rays raise, which surfaces as a rank/coverage error upstream.
inline std::function<double(const BrokenRay&)> sinogram_lookup(const Sinogram& s) {
  auto key = [](const BrokenRay& r) {
    return std::tuple<int, long, long long, long long>(
        r.n, r.m, std::llround(r.iota * 1e10), std::llround(r.kappa * 1e10));
  };
  auto table = std::make_shared<std::map<std::tuple<int, long, long long, long long>, double>>();
  for (const auto& e : s.entries) {
    double v = e.value;
    if (!s.normalized) v /= e.ray.n * e.ray.d();
    (*table)[key(e.ray)] = v;
  }
  return [table, key](const BrokenRay& r) {
    auto it = table->find(key(r));
    if (it == table->end())
      throw std::runtime_error("sinogram_lookup: measurement missing for a plan ray");
    return it->second;
  };
}

/// Empirical convergence of G f(gamma) toward the circular average g(z):
/// for each n, the sup over a fixed z-target set of the deviation at the
/// nearest coprime orbit with exactly n segments.
inline std::vector<std::pair<int, double>> convergence_study(
    const FourierField& field, double point, const std::vector<int>& n_list,
    int num_targets = 33) {
  std::vector<std::pair<int, double>> out;
  std::vector<double> targets;
  for (int i = 0; i < num_targets; ++i)
    targets.push_back(0.05 + 0.9 * i / (num_targets - 1));
  for (int n : n_list) {
    double worst = 0.0;
    for (double zt : targets) {
      double best_err = 1e300;
      int best_m = 0;
      for (int m = 1; 2 * m < n; ++m) {
        if (std::gcd(n, m) != 1) continue;
        double err = std::abs(std::cos(M_PI * m / n) - zt);
        if (err < best_err) {
          best_err = err;
          best_m = m;
        }
      }
      if (best_m == 0) continue;
      BrokenRay ray;
      ray.n = n;
      ray.m = best_m;
      ray.alpha = kTwoPi * best_m / n;
      ray.iota = point;
      ray.kappa = point;
      ray.validate();
      double meas = brt_analytic(field, ray);
      double gz = g_average(zt, field.a(0));
      worst = std::max(worst, std::abs(meas - gz));
    }
    out.emplace_back(n, worst);
  }
  return out;
}

}  // namespace brt

#endif
