#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "brt/geometry.hpp"

using namespace brt;

namespace {

// Independent point-to-segment distance.
double segment_distance(const Point& a, const Point& b) {
  double abx = b.x - a.x, aby = b.y - a.y;
  double t = -(a.x * abx + a.y * aby) / (abx * abx + aby * aby);
  t = std::clamp(t, 0.0, 1.0);
  double px = a.x + t * abx, py = a.y + t * aby;
  return std::hypot(px, py);
}

}  // namespace

TEST_CASE("make_ray derives alpha from the trajectory condition") {
  SECTION("closed triangular orbit") {
    auto r = make_ray(3, 1, 0.0, 0.0);
    CHECK(r.alpha == Catch::Approx(kTwoPi / 3.0).margin(1e-15));
    CHECK(r.z() == Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("diameter") {
    auto r = make_ray(1, 0, 0.0, M_PI);
    CHECK(r.alpha == Catch::Approx(M_PI).margin(1e-15));
    CHECK(r.z() == Catch::Approx(0.0).margin(1e-15));
    CHECK(r.d() == Catch::Approx(2.0).margin(1e-15));
  }
  SECTION("degenerate chord rejected") {
    CHECK_THROWS_AS(make_ray(2, 0, 0.0, 0.0), std::invalid_argument);
  }
  SECTION("invalid segment count rejected") {
    CHECK_THROWS_AS(make_ray(0, 0, 0.0, 1.0), std::invalid_argument);
  }
  SECTION("trajectory condition holds for random inputs") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ang(-10.0, 10.0);
    std::uniform_int_distribution<int> nn(1, 200);
    std::uniform_int_distribution<long> mm(-5, 50);
    for (int t = 0; t < 500; ++t) {
      int n = nn(gen);
      long m = mm(gen);
      double i = ang(gen), k = ang(gen);
      double alpha = (k - i + kTwoPi * m) / n;
      if (dist_to_2pi_multiple(alpha) < 1e-9) continue;
      double z = std::cos(alpha / 2.0);
      if (!(z >= 0.0 && z < 1.0)) continue;
      auto r = make_ray(n, m, i, k);
      double resid = r.n * r.alpha - (r.kappa - r.iota + kTwoPi * r.m);
      CHECK(std::abs(resid) < 1e-12 * std::max(1.0, std::abs(r.n * r.alpha)));
    }
  }
}

TEST_CASE("trace places vertices on the unit circle at the right angles") {
  auto tri = trace(make_ray(3, 1, 0.0, 0.0));
  REQUIRE(tri.size() == 4);
  CHECK(tri[0].x == Catch::Approx(1.0).margin(1e-14));
  CHECK(tri[1].x == Catch::Approx(std::cos(kTwoPi / 3)).margin(1e-14));
  CHECK(tri[1].y == Catch::Approx(std::sin(kTwoPi / 3)).margin(1e-14));
  CHECK(tri[3].x == Catch::Approx(1.0).margin(1e-13));
  CHECK(std::abs(tri[3].y) < 1e-13);

  auto diam = trace(make_ray(1, 0, 0.0, M_PI));
  CHECK(diam[0].x == Catch::Approx(1.0).margin(1e-14));
  CHECK(diam[1].x == Catch::Approx(-1.0).margin(1e-14));

  SECTION("vertices on the circle, segments at distance z") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> ang(-6.0, 6.0);
    std::uniform_int_distribution<int> nn(1, 40);
    std::uniform_int_distribution<long> mm(0, 15);
    for (int t = 0; t < 200; ++t) {
      int n = nn(gen);
      double i = ang(gen), k = ang(gen);
      long m = mm(gen);
      double alpha = (k - i + kTwoPi * m) / n;
      if (dist_to_2pi_multiple(alpha) < 1e-9) continue;
      double z = std::cos(alpha / 2.0);
      if (!(z >= 0.0 && z < 1.0)) continue;
      auto r = make_ray(n, m, i, k);
      auto pts = trace(r);
      for (const auto& p : pts)
        CHECK(std::abs(std::hypot(p.x, p.y) - 1.0) < 1e-14);
      double minimum = 1e300;
      for (int s = 0; s < r.n; ++s)
        minimum = std::min(minimum, segment_distance(pts[s], pts[s + 1]));
      CHECK(std::abs(minimum - r.z()) < 1e-12);
      for (int s = 0; s < r.n; ++s) {
        double len = std::hypot(pts[s + 1].x - pts[s].x, pts[s + 1].y - pts[s].y);
        CHECK(std::abs(len - r.d()) < 1e-12);
      }
    }
  }
}

TEST_CASE("reflect_check accepts true billiard paths and rejects perturbations") {
  CHECK(reflect_check(make_ray(3, 1, 0.0, 0.0)));
  auto pts = trace(make_ray(5, 2, 0.3, 0.3));
  CHECK(reflect_check_polyline(pts));
  // Perturb one interior vertex along the circle by 1e-3 radians.
  double th = std::atan2(pts[2].y, pts[2].x) + 1e-3;
  pts[2] = {std::cos(th), std::sin(th)};
  CHECK_FALSE(reflect_check_polyline(pts));
}

TEST_CASE("enumerate_symmetric_rays") {
  auto E = TomographySet::full_circle();
  SECTION("contains the triangle orbit at z = 1/2") {
    auto rays = enumerate_symmetric_rays(E, 0.7, 0.5, 10);
    bool found = false;
    for (const auto& r : rays)
      if (r.n == 3 && r.m == 1 && std::abs(r.kappa - r.iota) < 1e-12) found = true;
    CHECK(found);
  }
  SECTION("construction identities and specularity") {
    double axis = 1.1;
    auto rays = enumerate_symmetric_rays(E, axis, 0.37, 50);
    REQUIRE(!rays.empty());
    for (const auto& r : rays) {
      CHECK(std::abs(r.iota + r.kappa - 2 * axis) < 1e-12);
      CHECK(std::abs(r.z() - 0.37) < 1e-12);
      if (r.n >= 2) CHECK(reflect_check(r));
    }
  }
  SECTION("count grows with n_max on a narrow arc (equidistribution)") {
    // alpha/pi irrational: z chosen so alpha = 2*acos(z) is generic.
    double z = 0.43;
    auto Earc = TomographySet::make_open({{1.0 - 0.1, 1.0 + 0.1}});
    std::size_t c200 = enumerate_symmetric_rays(Earc, 1.0, z, 200).size();
    std::size_t c1000 = enumerate_symmetric_rays(Earc, 1.0, z, 1000).size();
    std::size_t c5000 = enumerate_symmetric_rays(Earc, 1.0, z, 5000).size();
    CHECK(c200 > 0);
    CHECK(c1000 > c200 + 5);
    CHECK(c5000 > c1000 + 50);
  }
}

TEST_CASE("enumerate_singleton_rays") {
  SECTION("explicit small catalog") {
    auto rays = enumerate_singleton_rays(0.0, 5);
    std::set<std::pair<int, long>> got;
    for (const auto& r : rays) got.insert({r.n, r.m});
    std::set<std::pair<int, long>> want{{3, 1}, {4, 1}, {5, 1}, {5, 2}};
    CHECK(got == want);
  }
  SECTION("z-values become dense") {
    auto rays = enumerate_singleton_rays(0.0, 512);
    std::vector<double> zs;
    for (const auto& r : rays) zs.push_back(r.z());
    std::sort(zs.begin(), zs.end());
    double zmax = std::cos(M_PI / 512);
    for (double w = 0.0; w <= zmax; w += 0.003) {
      auto it = std::lower_bound(zs.begin(), zs.end(), w - 0.01);
      bool ok = it != zs.end() && *it <= w + 0.01;
      CHECK(ok);
      if (!ok) break;
    }
  }
  SECTION("construction and specularity") {
    for (const auto& r : enumerate_singleton_rays(0.4, 40)) {
      CHECK(std::abs(r.n * r.alpha - (r.kappa - r.iota + kTwoPi * r.m)) < 1e-10);
      CHECK(reflect_check(r));
      CHECK(std::gcd(static_cast<long>(r.n), r.m) == 1);
    }
  }
}

TEST_CASE("reducible closed orbits trace the same point set as their reduction") {
  // (6, 2) covers the (3, 1) triangle twice.
  BrokenRay big;
  big.n = 6;
  big.m = 2;
  big.alpha = kTwoPi * 2 / 6;
  big.iota = 0.0;
  big.kappa = 0.0;
  big.validate();
  auto p_big = trace(big);
  auto p_small = trace(make_ray(3, 1, 0.0, 0.0));
  for (const auto& p : p_big) {
    double best = 1e300;
    for (const auto& q : p_small)
      best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("TomographySet membership") {
  auto E = TomographySet::make_open({{0.0, 0.5}});
  CHECK(E.contains(0.25));
  CHECK(E.contains(0.25 + kTwoPi));
  CHECK_FALSE(E.contains(0.75));
  CHECK_FALSE(E.contains(-0.1));
  auto S = TomographySet::make_singleton(1.0);
  CHECK(S.contains(1.0 + kTwoPi));
  CHECK_FALSE(S.contains(1.1));
  CHECK_THROWS_AS(TomographySet::make_open({}), std::invalid_argument);
  CHECK_THROWS_AS(TomographySet::make_open({{0.0, 0.0}}), std::invalid_argument);
}
