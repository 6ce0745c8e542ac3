#pragma once

#include <optional>
#include <string>
#include <vector>

#include "manp/grid.hpp"
#include "manp/model.hpp"

namespace manp {

enum class Preset { uniform, janus, mms };
enum class Integrator { euler, bdf2 };

Preset preset_from_string(const std::string& s);
Integrator integrator_from_string(const std::string& s);

/// Flat run configuration. Construct programmatically or via load_config;
/// finalize() fills preset-dependent defaults and validates.
struct RunConfig {
  Preset preset = Preset::uniform;

  int nx = 50, ny = 50;
  double lx = 2.0, ly = 2.0;
  double x0 = -1.0, y0 = -1.0;

  double kappa = 1.0;
  std::optional<double> chi;     // janus default 198.9437, else 0
  std::optional<double> v0;      // janus default 0.275^3, else 1
  double eps_uniform = 1.0;
  double eps_m = 1.0, eps_w = 78.0;
  std::vector<SpeciesParams> species;  // empty: preset defaults
  std::vector<double> init_c;          // empty: preset defaults (unused by mms)

  double dt = 1e-3;
  double t_final = 1.0;
  Integrator integrator = Integrator::euler;
  MeanKind mean_kind = MeanKind::entropic;
  // Zero Theta every k-th step (0: never). An occasional divergence-free
  // reset stops solver round-off from accumulating through the
  // extrapolation at the cost of a few extra sweeps on those steps.
  int theta_reset_every = 16;

  std::optional<double> eps_tol;  // janus default 1e-5, else 1e-6
  int max_sweeps = 10000;
  double solver_tol = 1e-10;

  std::string output_dir = "out";
  int snapshot_every = 0;  // 0: initial and final state only

  // mms-study section
  std::vector<double> mms_h_list = {0.1, 0.05, 0.025};
  std::string mms_dt_rule = "h2";  // "h2" or "h10"
  double mms_t_final = 1.0;

  // relax-bench section
  std::vector<int> bench_sizes = {32, 64, 128};
  int bench_repeats = 5;
  int bench_warm_steps = 3;

  bool finalized = false;

  void finalize();  // throws ConfigError on invalid settings

  GridSpec make_grid() const;
  ModelParams make_model_params(const GridSpec& g) const;
};

/// Parses the flat key = value format (dotted section keys, '#' comments).
/// Unknown keys are hard errors. The returned config is finalized.
RunConfig load_config(const std::string& path);

}  // namespace manp
