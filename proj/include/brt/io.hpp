#ifndef BRT_IO_HPP
#define BRT_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "brt/field.hpp"
#include "brt/forward.hpp"
#include "brt/geometry.hpp"
#include "brt/profile.hpp"

namespace brt {

using json = nlohmann::json;

inline json ray_to_json(const BrokenRay& r) {
  return json{{"n", r.n}, {"m", r.m}, {"alpha", r.alpha},
              {"iota", r.iota}, {"kappa", r.kappa}};
}

inline BrokenRay ray_from_json(const json& j) {
  BrokenRay r;
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<long>();
  r.alpha = j.at("alpha").get<double>();
  r.iota = j.at("iota").get<double>();
  r.kappa = j.at("kappa").get<double>();
  // alpha is redundant; recheck it against the trajectory condition.
  double expect = (r.kappa - r.iota + kTwoPi * static_cast<double>(r.m)) / r.n;
  if (std::abs(expect - r.alpha) > 1e-12)
    throw std::runtime_error("ray_from_json: alpha inconsistent with (n,m,iota,kappa)");
  r.validate();
  return r;
}

inline json field_to_json(const FourierField& f) {
  json j;
  j["K"] = f.K();
  j["grid"] = f.grid();
  json a = json::array(), b = json::array();
  for (int k = 0; k <= f.K(); ++k) a.push_back(f.a(k).values());
  for (int k = 1; k <= f.K(); ++k) b.push_back(f.b(k).values());
  j["a"] = a;
  j["b"] = b;
  return j;
}

inline FourierField field_from_json(const json& j) {
  int K = j.at("K").get<int>();
  auto grid = j.at("grid").get<std::vector<double>>();
  std::vector<RadialProfile> a, b;
  for (const auto& vals : j.at("a"))
    a.emplace_back(grid, vals.get<std::vector<double>>());
  for (const auto& vals : j.at("b"))
    b.emplace_back(grid, vals.get<std::vector<double>>());
  if (a.size() != static_cast<std::size_t>(K) + 1 ||
      b.size() != static_cast<std::size_t>(K))
    throw std::runtime_error("field_from_json: coefficient count mismatch");
  return FourierField(K, std::move(a), std::move(b));
}

inline json sinogram_to_json(const Sinogram& s) {
  json j;
  j["normalized"] = s.normalized;
  j["seed"] = s.seed;
  j["sigma"] = s.sigma;
  json entries = json::array();
  for (const auto& e : s.entries)
    entries.push_back(json{{"ray", ray_to_json(e.ray)}, {"value", e.value}});
  j["entries"] = entries;
  return j;
}

inline Sinogram sinogram_from_json(const json& j) {
  Sinogram s;
  s.normalized = j.at("normalized").get<bool>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.sigma = j.at("sigma").get<double>();
  for (const auto& e : j.at("entries")) {
    Sinogram::Entry entry;
    entry.ray = ray_from_json(e.at("ray"));
    entry.value = e.at("value").get<double>();
    s.entries.push_back(entry);
  }
  return s;
}

/// All floats are written with 17 significant digits so round trips are
/// lossless.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  json j;
  is >> j;
  return j;
}

inline void write_profile_csv(const std::string& path, const RadialProfile& p) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "r,value\n";
  for (std::size_t i = 0; i < p.grid().size(); ++i)
    os << fmt17(p.grid()[i]) << "," << fmt17(p.values()[i]) << "\n";
}

inline void write_polyline_csv(const std::string& path,
                               const std::vector<Point>& pts) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "x,y\n";
  for (const auto& p : pts) os << fmt17(p.x) << "," << fmt17(p.y) << "\n";
}

inline void write_sinogram_csv(const std::string& path, const Sinogram& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "n,m,alpha,iota,kappa,z,value\n";
  for (const auto& e : s.entries) {
    os << e.ray.n << "," << e.ray.m << "," << fmt17(e.ray.alpha) << ","
       << fmt17(e.ray.iota) << "," << fmt17(e.ray.kappa) << ","
       << fmt17(e.ray.z()) << "," << fmt17(e.value) << "\n";
  }
}

/// Dense polar raster of a field for plotting.
inline void write_raster_csv(const std::string& path, const FourierField& f,
                             int nr = 64, int ntheta = 128) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "r,theta,value\n";
  for (int i = 0; i <= nr; ++i) {
    double r = static_cast<double>(i) / nr;
    for (int j = 0; j < ntheta; ++j) {
      double th = kTwoPi * j / ntheta;
      os << fmt17(r) << "," << fmt17(th) << "," << fmt17(f.eval(r, th)) << "\n";
    }
  }
}

}  // namespace brt

#endif
