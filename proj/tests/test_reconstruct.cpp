#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>

#include "brt/reconstruct.hpp"

using namespace brt;

namespace {

// Adaptive Simpson with the singularity at r = z removed independently by
// r = z + t^2 (a different substitution than the library's).
double integral_against_p(double z, const std::function<double(double)>& f) {
  auto g = [&](double t) {
    double r = z + t * t;
    return 2.0 * (z + t * t) * f(r) /
           (std::sqrt(1.0 - z * z) * std::sqrt(r + z));
  };
  int M = 40000;  // composite Simpson on the smooth transformed integrand
  double T = std::sqrt(1.0 - z), s = 0.0;
  for (int i = 0; i < M; ++i) {
    double a = T * i / M, b = T * (i + 1) / M;
    s += (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
  }
  return s;
}

// Band limit 2 off-center blob (same family as the K = 8 phantom).
FourierField blob_k2(int N) {
  const double r0 = 0.45, th0 = 0.7, s2 = 0.09;
  std::vector<RadialProfile> a, b;
  for (int k = 0; k <= 2; ++k)
    a.push_back(RadialProfile::sample(N, [=](double r) {
      double eps = (k == 0) ? 1.0 : 2.0;
      return eps * std::exp(-(r * r + r0 * r0) / s2) *
             std::cyl_bessel_i(k, 2.0 * r * r0 / s2) * std::cos(k * th0);
    }));
  for (int k = 1; k <= 2; ++k)
    b.push_back(RadialProfile::sample(N, [=](double r) {
      return 2.0 * std::exp(-(r * r + r0 * r0) / s2) *
             std::cyl_bessel_i(k, 2.0 * r * r0 / s2) * std::sin(k * th0);
    }));
  return FourierField(2, std::move(a), std::move(b));
}

double profile_rel_l2(const RadialProfile& got, const RadialProfile& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.values().size(); ++i) {
    double d = got.values()[i] - want.values()[i];
    num += d * d;
    den += want.values()[i] * want.values()[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

}  // namespace

TEST_CASE("p_density") {
  SECTION("domain checks") {
    CHECK_THROWS_AS(p_density(0.3, 0.2), std::domain_error);
    CHECK_THROWS_AS(p_density(0.3, 0.3), std::domain_error);
    CHECK_THROWS_AS(p_density(0.0, 0.5), std::domain_error);
  }
  SECTION("blows up at the lower endpoint") {
    CHECK(p_density(0.4, 0.4 + 1e-8) > 1e3);
  }
  SECTION("normalization at z = 0.3") {
    double total = integral_against_p(0.3, [](double) { return 1.0; });
    CHECK(total == Catch::Approx(1.0).margin(1e-8));
    CHECK(g_average(0.3, [](double) { return 1.0; }) ==
          Catch::Approx(1.0).margin(1e-8));
  }
  SECTION("g equals the scaled zeroth Abel transform") {
    std::mt19937_64 gen(111);
    std::uniform_real_distribution<double> zz(0.1, 0.9), c(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      double z = zz(gen);
      double c1 = c(gen), c2 = c(gen);
      auto a0 = [=](double r) { return 0.5 + c1 * r * r + c2 * std::sin(3.0 * r); };
      double direct = integral_against_p(z, a0);
      CHECK(g_average(z, a0) == Catch::Approx(direct).margin(1e-7));
    }
  }
}

TEST_CASE("make_singleton_plan invariants") {
  std::vector<double> targets;
  for (int i = 0; i < 32; ++i) targets.push_back(0.03 + 0.93 * i / 31.0);
  auto plan = make_singleton_plan(0.0, 128, targets);
  REQUIRE(plan.rays.size() == targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& r = plan.rays[i];
    CHECK(r.n >= 128);
    CHECK(std::gcd(static_cast<long>(r.n), r.m) == 1);
    CHECK(std::abs(r.z() - targets[i]) < 1e-3);
    CHECK(r.iota == plan.point);
    CHECK(r.kappa == plan.point);
  }
}

TEST_CASE("reconstruct_a0_singleton") {
  std::vector<double> targets;
  for (int i = 0; i < 64; ++i) targets.push_back(0.02 + 0.95 * i / 63.0);
  SECTION("uniform phantom") {
    auto f = phantom("uniform", 256);
    auto plan = make_singleton_plan(0.0, 128, targets);
    auto data = simulate(f, plan.rays, true);
    auto a0 = reconstruct_a0_singleton(data, plan, 256);
    double worst = 0.0;
    for (double v : a0.values()) worst = std::max(worst, std::abs(v - 1.0));
    CHECK(worst <= 2e-2);
  }
  SECTION("ring phantom") {
    auto f = phantom("ring", 512);
    auto plan = make_singleton_plan(0.0, 512, targets);
    auto data = simulate(f, plan.rays, true);
    auto a0 = reconstruct_a0_singleton(data, plan, 512);
    CHECK(profile_rel_l2(a0, f.a(0)) <= 2e-2);
  }
  SECTION("pure a5 field leaves a vanishing radial reconstruction") {
    int N = 256;
    std::vector<RadialProfile> a(6, RadialProfile::zeros(N));
    a[5] = RadialProfile::sample(N, [](double r) { return r * (1.0 - r); });
    std::vector<RadialProfile> b(5, RadialProfile::zeros(N));
    FourierField f(5, std::move(a), std::move(b));
    double prev = 1e300;
    for (int n_min : {64, 256}) {
      auto plan = make_singleton_plan(0.0, n_min, targets);
      auto data = simulate(f, plan.rays, true);
      auto a0 = reconstruct_a0_singleton(data, plan, N);
      double worst = 0.0;
      for (double v : a0.values()) worst = std::max(worst, std::abs(v));
      CHECK(worst < 5e-2);
      CHECK(worst <= prev + 1e-6);
      prev = worst;
    }
  }
  SECTION("monotone improvement in n_min on the ring") {
    auto f = phantom("ring", 256);
    double prev = 1e300;
    for (int n_min : {64, 128, 256, 512}) {
      auto plan = make_singleton_plan(0.0, n_min, targets);
      auto data = simulate(f, plan.rays, true);
      auto a0 = reconstruct_a0_singleton(data, plan, 256);
      double err = profile_rel_l2(a0, f.a(0));
      CHECK(err <= prev * 1.1);
      prev = err;
    }
  }
}

TEST_CASE("convergence_study") {
  SECTION("constant field has no bias") {
    auto f = phantom("uniform", 128);
    for (auto [n, dev] : convergence_study(f, 0.0, {8, 32, 128}))
      CHECK(dev < 1e-9);
  }
  SECTION("ring deviation decays by at least 4x from n=32 to n=512") {
    auto f = phantom("ring", 256);
    auto table = convergence_study(f, 0.0, {32, 512});
    REQUIRE(table.size() == 2);
    CHECK(table[1].second * 4.0 <= table[0].second);
  }
  SECTION("pure k=8 harmonic annihilates whenever n does not divide 8") {
    int N = 128;
    std::vector<RadialProfile> a(9, RadialProfile::zeros(N));
    a[8] = RadialProfile::sample(N, [](double r) { return r * r * (1.0 - r); });
    std::vector<RadialProfile> b(8, RadialProfile::zeros(N));
    FourierField f(8, std::move(a), std::move(b));
    for (int n : {3, 5, 7, 9, 11, 13})
      for (int m = 1; 2 * m < n; ++m) {
        if (std::gcd(n, m) != 1) continue;
        auto ray = make_ray(n, m, 0.0, 0.0);
        if (8 % n != 0) CHECK(std::abs(brt_analytic(f, ray)) < 1e-12);
      }
  }
}

TEST_CASE("reconstruct_open") {
  const int N = 128;
  auto truth = blob_k2(N);
  auto E = TomographySet::full_circle();
  auto measure = [&](const BrokenRay& ray) { return brt_analytic(truth, ray); };

  SECTION("noiseless recovery of a K=2 blob from full-circle data") {
    auto plan = make_open_plan(E, 2, N, 400);
    OpenSetReport report;
    auto rec = reconstruct_open(measure, plan, N, &report);
    CHECK(report.max_cond < 1e4);
    for (int k = 0; k <= 2; ++k) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < truth.grid().size(); ++i) {
        double d = rec.a(k).values()[i] - truth.a(k).values()[i];
        num += d * d;
        den += truth.a(k).values()[i] * truth.a(k).values()[i];
      }
      CHECK(std::sqrt(num / std::max(den, 1e-12)) < 2e-2);
    }
    for (int k = 1; k <= 2; ++k) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < truth.grid().size(); ++i) {
        double d = rec.b(k).values()[i] - truth.b(k).values()[i];
        num += d * d;
        den += truth.b(k).values()[i] * truth.b(k).values()[i];
      }
      CHECK(std::sqrt(num / std::max(den, 1e-12)) < 2e-2);
    }
    SECTION("re-simulation consistency on plan rays") {
      double worst = 0.0;
      for (std::size_t zi = 0; zi < plan.zs.size(); zi += 16) {
        for (std::size_t j = 0; j < plan.rays[0][zi].size(); j += 37) {
          const auto& ray = plan.rays[0][zi][j];
          double orig = measure(ray);
          double redo = brt_analytic(rec, ray);
          worst = std::max(worst,
                           std::abs(orig - redo) / std::max(std::abs(orig), 1e-2));
        }
      }
      CHECK(worst < 2e-3);
    }
  }

  SECTION("single-axis path agrees with the two-axis path when b = 0") {
    // Cosine-only field about axis 0.
    std::vector<RadialProfile> a;
    for (int k = 0; k <= 2; ++k)
      a.push_back(RadialProfile::sample(N, [=](double r) {
        double v = 0.4 * std::exp(-8.0 * (r - 0.5) * (r - 0.5));
        return (k == 0) ? v : v * r / (k + 1.0);
      }));
    std::vector<RadialProfile> b(2, RadialProfile::zeros(N));
    FourierField g(2, std::move(a), std::move(b));
    auto meas = [&](const BrokenRay& ray) { return brt_analytic(g, ray); };
    auto plan1 = make_open_plan(E, 2, N, 400, 1, 0.98, {0.0});
    auto plan2 = make_open_plan(E, 2, N, 400, 2, 0.98, {0.0, 0.9});
    auto rec1 = reconstruct_open(meas, plan1, N);
    auto rec2 = reconstruct_open(meas, plan2, N);
    for (int k = 0; k <= 2; ++k)
      for (std::size_t i = 0; i < rec1.grid().size(); ++i)
        CHECK(std::abs(rec1.a(k).values()[i] - rec2.a(k).values()[i]) < 1e-6);
  }

  SECTION("antisymmetric field annihilates the axis-0 cosine channel") {
    auto f = phantom("antisym", N);
    auto meas = [&](const BrokenRay& ray) { return brt_analytic(f, ray); };
    auto plan = make_open_plan(E, 3, N, 400, 1, 0.98, {0.0});
    auto rec = reconstruct_open(meas, plan, N);
    for (int k = 0; k <= 3; ++k)
      for (double v : rec.a(k).values()) CHECK(std::abs(v) < 1e-8);
  }

  SECTION("missing measurements surface as coverage errors") {
    auto plan = make_open_plan(E, 2, N, 400);
    Sinogram s = simulate(truth, plan.rays[0][10], true);
    s.entries.resize(s.entries.size() / 2);  // truncate half the rays
    CHECK_THROWS(reconstruct_open(sinogram_lookup(s), plan, N));
  }

  SECTION("rank deficiency is reported with location") {
    auto plan = make_open_plan(E, 2, N, 400);
    plan.rays[0][5].resize(2);  // starve one family
    CHECK_THROWS_WITH(reconstruct_open(measure, plan, N),
                      Catch::Matchers::ContainsSubstring("rank-deficient"));
  }
}
