#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "manp/config.hpp"
#include "manp/errors.hpp"
#include "manp/mms.hpp"
#include "manp/simulation.hpp"

namespace {

constexpr const char* kConfigHelp = R"(Config file format: one `key = value` per line, `#` comments.

Keys:
  grid.nx, grid.ny            nodes per direction (>= 2)
  grid.lx, grid.ly            domain lengths            [default 2, 2]
  grid.x0, grid.y0            lower-left corner         [default -1, -1]
  model.preset                uniform | janus | mms     [default uniform]
  model.kappa                 Debye ratio kappa         [default 1]
  model.chi                   Born coupling             [janus default 198.9437, else 0]
  model.v0                    solvent molecule volume   [janus default 0.275^3, else 1]
  model.eps                   uniform dielectric        [default 1]
  model.eps_m, model.eps_w    janus dielectric levels   [default 1, 78]
  species.count               number of species         [preset default 2]
  species.<k>.q/.v/.a         valence, volume, Born radius of species k
  init.c.<k>                  constant initial concentration of species k
  time.dt, time.t_final       step size and final time
  scheme.integrator           euler | bdf2              [default euler]
  scheme.mean                 entropic | arithmetic | geometric | harmonic
  scheme.theta_reset_every    zero Theta every k-th euler step [default 16; 0 never]
  relax.eps_tol               relaxation stop tolerance [janus default 1e-5, else 1e-6]
  relax.max_sweeps            sweep cap                 [default 10000]
  solver.tol                  linear solve rel. residual [default 1e-10]
  output.dir                  output directory          [default out; env MANP_OUTPUT_DIR overrides]
  output.snapshot_every       snapshot period in steps  [0: initial+final only]
  mms.h_list                  mms-study mesh sizes      [default 0.1,0.05,0.025]
  mms.dt_rule                 h2 | h10                  [default h2]
  mms.t_final                 mms-study final time      [default 1]
  bench.sizes                 relax-bench grids         [default 32,64,128]
  bench.repeats               timing repeats            [default 5]
  bench.warm_steps            steps before timing       [default 3]

Snapshots: one CSV per field (c1..cM, Dx, Dy) named <field>_<step>.csv with a
`# field=...,step=...,time=...,nx=...,ny=...` header line followed by ny rows
of nx comma-separated values (x index fastest).

Diagnostics time series (diagnostics.csv), one row per accepted step:
  step,time,mass_1..mass_M,energy,min_concentration,max_gauss_residual,
  max_curl_residual,max_peclet,dt_star,dissipation_I1,relax_sweeps
)";

int fail_config(const std::exception& e) {
  nlohmann::json rec{{"error", "config"}, {"message", e.what()}};
  std::cerr << rec.dump() << "\n";
  return 2;
}

int fail_numerical(const manp::NumericalError& e) {
  nlohmann::json rec{{"error", e.code()}, {"step", e.step()}, {"message", e.what()}};
  std::cerr << rec.dump() << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving Maxwell-Ampere Nernst-Planck solver"};
  app.footer(kConfigHelp);
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run a configured simulation");
  run_cmd->add_option("config", config_path, "config file")->required();

  auto* mms_cmd =
      app.add_subcommand("mms-study", "Manufactured-solution convergence study");
  mms_cmd->add_option("config", config_path, "config file")->required();

  auto* bench_cmd =
      app.add_subcommand("relax-bench", "Relaxation wall-time scaling");
  bench_cmd->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  manp::RunConfig cfg;
  try {
    cfg = manp::load_config(config_path);
  } catch (const manp::ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    return fail_config(e);
  }

  try {
    if (run_cmd->parsed()) {
      manp::run_simulation(cfg);
    } else if (mms_cmd->parsed()) {
      const auto rule = cfg.mms_dt_rule == "h10" ? manp::mms::DtRule::dt_h_over_10
                                                 : manp::mms::DtRule::dt_h_squared;
      auto rows = manp::mms::convergence_study(cfg.mms_h_list, rule, cfg.mms_t_final);
      const std::string csv = manp::mms::convergence_csv(rows);
      std::cout << csv;
      std::string outdir = cfg.output_dir;
      if (const char* env = std::getenv("MANP_OUTPUT_DIR")) outdir = env;
      std::filesystem::create_directories(outdir);
      std::ofstream out(outdir + "/convergence.csv");
      out << csv;
    } else if (bench_cmd->parsed()) {
      auto pts = manp::relax_complexity_bench(cfg.bench_sizes,
                                              cfg.bench_warm_steps,
                                              cfg.bench_repeats);
      std::printf("n,cells,seconds,sweeps\n");
      for (const auto& p : pts)
        std::printf("%d,%zu,%.6e,%d\n", p.n, p.cells, p.seconds, p.sweeps);
      std::printf("# loglog slope = %.4f\n", manp::loglog_slope(pts));
    }
  } catch (const manp::NumericalError& e) {
    return fail_numerical(e);
  } catch (const manp::ConfigError& e) {
    return fail_config(e);
  } catch (const std::exception& e) {
    nlohmann::json rec{{"error", "internal"}, {"message", e.what()}};
    std::cerr << rec.dump() << "\n";
    return 3;
  }
  return 0;
}
