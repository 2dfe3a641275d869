// Command-line front end: phantom generation, sinogram simulation,
// reconstruction, ray tracing, and field comparison, with JSON/CSV
// artifacts for every stage.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "brt/field.hpp"
#include "brt/forward.hpp"
#include "brt/geometry.hpp"
#include "brt/io.hpp"
#include "brt/reconstruct.hpp"

namespace {

using namespace brt;

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("BRT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::vector<double> default_targets(int count) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i)
    t.push_back(0.02 + 0.95 * i / std::max(1, count - 1));
  return t;
}

struct SimArgs {
  std::string field_path, out_path, csv_path, mode = "singleton";
  double point = 0.0, e_lo = 0.0, e_hi = 0.5, sigma = 0.0;
  int n_min = 512, n_max = 2000, num_targets = 64, K = 8, grid = 256;
  unsigned long long seed = 0;
  bool raw = false;
  int threads = 0;
};

std::vector<BrokenRay> build_rays(const SimArgs& a, const FourierField& field) {
  if (a.mode == "singleton") {
    auto plan = make_singleton_plan(a.point, a.n_min, default_targets(a.num_targets));
    return plan.rays;
  }
  if (a.mode == "open") {
    auto E = TomographySet::make_open({{a.e_lo, a.e_hi}});
    auto plan = make_open_plan(E, a.K, a.grid, a.n_max);
    std::vector<BrokenRay> rays;
    for (const auto& per_axis : plan.rays)
      for (const auto& fam : per_axis)
        rays.insert(rays.end(), fam.begin(), fam.end());
    return rays;
  }
  (void)field;
  throw std::invalid_argument("unknown simulation mode '" + a.mode + "'");
}

json metrics_json(const FourierField& truth, const FourierField& rec) {
  if (truth.K() != rec.K() || truth.intervals() != rec.intervals())
    throw std::invalid_argument("evaluate: field shapes do not match");
  json per_coef = json::array();
  double linf = 0.0, l2num = 0.0, l2den = 0.0;
  auto coef_entry = [&](const std::string& name, const RadialProfile& t,
                        const RadialProfile& r) {
    double num = 0.0, den = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < t.values().size(); ++i) {
      double d = r.values()[i] - t.values()[i];
      num += d * d;
      den += t.values()[i] * t.values()[i];
      sup = std::max(sup, std::abs(d));
    }
    linf = std::max(linf, sup);
    l2num += num;
    l2den += den;
    per_coef.push_back(json{{"coef", name},
                            {"l2_abs", std::sqrt(num)},
                            {"l2_rel", std::sqrt(num) / std::max(std::sqrt(den), 1e-300)},
                            {"linf", sup}});
  };
  for (int k = 0; k <= truth.K(); ++k)
    coef_entry("a" + std::to_string(k), truth.a(k), rec.a(k));
  for (int k = 1; k <= truth.K(); ++k)
    coef_entry("b" + std::to_string(k), truth.b(k), rec.b(k));
  json out;
  out["per_coefficient"] = per_coef;
  out["l2_abs"] = std::sqrt(l2num);
  out["l2_rel"] = std::sqrt(l2num) / std::max(std::sqrt(l2den), 1e-300);
  out["linf"] = linf;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broken ray transform toolkit for the unit disk"};
  app.require_subcommand(1);

  // phantom
  std::string ph_name = "uniform", ph_out = "field.json", ph_raster;
  int ph_grid = 512;
  auto* cmd_ph = app.add_subcommand("phantom", "Generate a test field");
  cmd_ph->add_option("--name", ph_name, "uniform | ring | offcenter-K8 | antisym");
  cmd_ph->add_option("--grid", ph_grid, "radial grid intervals");
  cmd_ph->add_option("--out", ph_out, "output field JSON");
  cmd_ph->add_option("--raster", ph_raster, "optional polar raster CSV");

  // simulate
  SimArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Simulate a sinogram");
  cmd_sim->add_option("--field", sim.field_path, "input field JSON")->required();
  cmd_sim->add_option("--out", sim.out_path, "output sinogram JSON")->required();
  cmd_sim->add_option("--csv", sim.csv_path, "optional sinogram CSV");
  cmd_sim->add_option("--mode", sim.mode, "singleton | open");
  cmd_sim->add_option("--point", sim.point, "singleton boundary angle");
  cmd_sim->add_option("--n-min", sim.n_min, "singleton minimum segment count");
  cmd_sim->add_option("--num-targets", sim.num_targets, "singleton target count");
  cmd_sim->add_option("--e-lo", sim.e_lo, "open-arc lower angle");
  cmd_sim->add_option("--e-hi", sim.e_hi, "open-arc upper angle");
  cmd_sim->add_option("--k", sim.K, "open-mode band limit of the plan");
  cmd_sim->add_option("--n-max", sim.n_max, "open-mode maximum segment count");
  cmd_sim->add_option("--grid", sim.grid, "open-mode z-grid intervals");
  cmd_sim->add_option("--sigma", sim.sigma, "Gaussian noise level");
  cmd_sim->add_option("--seed", sim.seed, "noise RNG seed");
  cmd_sim->add_flag("--raw", sim.raw, "store raw (unnormalized) integrals");
  cmd_sim->add_option("--threads", sim.threads, "worker cap (BRT_THREADS fallback)");

  // reconstruct
  std::string rc_sino, rc_out = "recon.json", rc_report, rc_truth, rc_mode = "singleton";
  double rc_point = 0.0, rc_e_lo = 0.0, rc_e_hi = 0.5, rc_lambda = 1e-8;
  int rc_n_min = 512, rc_n_max = 2000, rc_num_targets = 64, rc_K = 8, rc_grid = 256;
  int rc_threads = 0;
  auto* cmd_rc = app.add_subcommand("reconstruct", "Invert a sinogram");
  cmd_rc->add_option("--sinogram", rc_sino, "input sinogram JSON")->required();
  cmd_rc->add_option("--out", rc_out, "output field JSON");
  cmd_rc->add_option("--report", rc_report, "output report JSON");
  cmd_rc->add_option("--truth", rc_truth, "optional ground-truth field JSON");
  cmd_rc->add_option("--mode", rc_mode, "singleton | open");
  cmd_rc->add_option("--point", rc_point, "singleton boundary angle");
  cmd_rc->add_option("--n-min", rc_n_min, "singleton minimum segment count");
  cmd_rc->add_option("--num-targets", rc_num_targets, "singleton target count");
  cmd_rc->add_option("--e-lo", rc_e_lo, "open-arc lower angle");
  cmd_rc->add_option("--e-hi", rc_e_hi, "open-arc upper angle");
  cmd_rc->add_option("--k", rc_K, "open-mode band limit");
  cmd_rc->add_option("--n-max", rc_n_max, "open-mode maximum segment count");
  cmd_rc->add_option("--grid", rc_grid, "reconstruction grid intervals");
  cmd_rc->add_option("--lambda", rc_lambda, "Tikhonov scale for the harmonic solves");
  cmd_rc->add_option("--threads", rc_threads, "worker cap (BRT_THREADS fallback)");

  // trace
  int tr_n = 3;
  long tr_m = 1;
  double tr_iota = 0.0, tr_kappa = 0.0;
  std::string tr_out = "trace.csv";
  auto* cmd_tr = app.add_subcommand("trace", "Emit a ray's polyline as CSV");
  cmd_tr->add_option("--n", tr_n, "segment count");
  cmd_tr->add_option("--m", tr_m, "winding number");
  cmd_tr->add_option("--iota", tr_iota, "start boundary angle");
  cmd_tr->add_option("--kappa", tr_kappa, "end boundary angle");
  cmd_tr->add_option("--out", tr_out, "output CSV");

  // evaluate
  std::string ev_truth, ev_recon, ev_out = "metrics.json";
  auto* cmd_ev = app.add_subcommand("evaluate", "Compare two fields");
  cmd_ev->add_option("--truth", ev_truth, "ground-truth field JSON")->required();
  cmd_ev->add_option("--recon", ev_recon, "reconstructed field JSON")->required();
  cmd_ev->add_option("--out", ev_out, "output metrics JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_ph->parsed()) {
      auto f = phantom(ph_name, ph_grid);
      write_json_file(ph_out, field_to_json(f));
      if (!ph_raster.empty()) write_raster_csv(ph_raster, f);
      std::cout << "wrote " << ph_out << "\n";
      return 0;
    }
    if (cmd_sim->parsed()) {
      auto field = field_from_json(read_json_file(sim.field_path));
      auto rays = build_rays(sim, field);
      std::optional<double> sigma;
      if (sim.sigma > 0.0) sigma = sim.sigma;
      auto s = simulate(field, rays, !sim.raw, sigma, sim.seed,
                        resolve_threads(sim.threads));
      write_json_file(sim.out_path, sinogram_to_json(s));
      if (!sim.csv_path.empty()) write_sinogram_csv(sim.csv_path, s);
      std::cout << "wrote " << sim.out_path << " (" << s.entries.size()
                << " entries)\n";
      return 0;
    }
    if (cmd_rc->parsed()) {
      auto s = sinogram_from_json(read_json_file(rc_sino));
      json report;
      report["mode"] = rc_mode;
      int exit_code = 0;
      try {
        if (rc_mode == "singleton") {
          auto plan = make_singleton_plan(rc_point, rc_n_min,
                                          default_targets(rc_num_targets));
          auto a0 = reconstruct_a0_singleton(s, plan, rc_grid);
          std::vector<RadialProfile> a{a0};
          FourierField rec(0, std::move(a), {});
          write_json_file(rc_out, field_to_json(rec));
          if (!rc_truth.empty()) {
            auto truth = field_from_json(read_json_file(rc_truth));
            std::vector<RadialProfile> ta{truth.a(0)};
            FourierField truth0(0, std::move(ta), {});
            report["metrics"] = metrics_json(truth0, rec);
          }
        } else if (rc_mode == "open") {
          auto E = TomographySet::make_open({{rc_e_lo, rc_e_hi}});
          auto plan = make_open_plan(E, rc_K, rc_grid, rc_n_max);
          plan.lambda_scale = rc_lambda;
          OpenSetReport osr;
          auto rec = reconstruct_open(sinogram_lookup(s), plan, rc_grid, &osr);
          write_json_file(rc_out, field_to_json(rec));
          report["max_condition_number"] = osr.max_cond;
          json solves = json::array();
          for (const auto& info : osr.solves)
            solves.push_back(json{{"axis", plan.axes[info.axis]},
                                  {"z", info.z},
                                  {"rays", info.rays_used},
                                  {"cond", info.cond},
                                  {"residual", info.residual}});
          report["solves"] = solves;
          if (!rc_truth.empty()) {
            auto truth = field_from_json(read_json_file(rc_truth));
            report["metrics"] = metrics_json(truth, rec);
          }
        } else {
          throw std::invalid_argument("unknown reconstruction mode '" + rc_mode + "'");
        }
      } catch (const std::exception& e) {
        report["error"] = e.what();
        exit_code = 1;
        std::cerr << "reconstruction failed: " << e.what() << "\n";
      }
      if (!rc_report.empty()) write_json_file(rc_report, report);
      if (exit_code == 0) std::cout << "wrote " << rc_out << "\n";
      return exit_code;
    }
    if (cmd_tr->parsed()) {
      auto ray = make_ray(tr_n, tr_m, tr_iota, tr_kappa);
      write_polyline_csv(tr_out, trace(ray));
      std::cout << "wrote " << tr_out << "\n";
      return 0;
    }
    if (cmd_ev->parsed()) {
      auto truth = field_from_json(read_json_file(ev_truth));
      auto recon = field_from_json(read_json_file(ev_recon));
      write_json_file(ev_out, metrics_json(truth, recon));
      std::cout << "wrote " << ev_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
