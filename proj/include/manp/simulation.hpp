#pragma once

#include <string>
#include <vector>

#include "manp/ampere.hpp"
#include "manp/config.hpp"
#include "manp/curlfree.hpp"
#include "manp/diagnostics.hpp"
#include "manp/grid.hpp"
#include "manp/model.hpp"
#include "manp/np_scheme.hpp"

namespace manp {

/// Time-stepping state. gauss_rhs is the scheme-propagated right-hand side
/// of the discrete Gauss law (equals the charge density for source-free
/// runs); the per-step residual is measured against it.
struct SimState {
  int n = 0;
  double t = 0.0;
  std::vector<NodeField> c;
  EdgeField D;
  ThetaHistory theta_hist;
  NodeField gauss_rhs;

  // previous level, kept for BDF2
  std::vector<NodeField> c_prev;
  EdgeField D_prev;
  std::vector<EdgeField> dg_prev;
  EdgeField theta_prev, theta_prev2;
  NodeField gauss_rhs_prev;
};

/// D0 construction: exact constant-coefficient Poisson solve
/// 2 kappa^2 div(grad psi) = rho (periodic, zero mean), D0 = grad psi,
/// then curl-free relaxation of D0/eps. Throws NonNeutral when the total
/// charge is not zero.
EdgeField build_initial_displacement(const std::vector<NodeField>& c0,
                                     const NodeField& rho_f,
                                     const ModelParams& params,
                                     const GridSpec& g,
                                     const EdgeField& eps_edges,
                                     RelaxReport* report = nullptr);

/// Algorithm driver: semi-implicit NP solve, explicit Maxwell-Ampere
/// update, curl-free relaxation, per-step diagnostics. The MMS preset
/// wires in the manufactured sources and exact initial data.
class Simulation {
 public:
  explicit Simulation(const RunConfig& cfg);

  void step();
  bool done() const { return state_.n >= total_steps_; }
  int total_steps() const { return total_steps_; }

  const SimState& state() const { return state_; }
  const GridSpec& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  const EdgeField& eps_edges() const { return eps_edges_; }
  const NodeField& eps_nodes() const { return eps_nodes_; }
  const StepDiagnostics& last_diag() const { return diag_; }
  const RelaxReport& init_relax_report() const { return init_relax_; }
  const EdgeField& last_prerelax_D() const { return prerelax_D_; }
  bool mms_active() const { return mms_; }

 private:
  void step_euler();
  void step_bdf2();
  void finish_step(const std::vector<NodeField>& c_new, EdgeField&& D_new,
                   const std::vector<EdgeField>& dg_n,
                   const std::vector<EdgeField>& dg_used,
                   const std::vector<EdgeField>& J_all,
                   const std::vector<NodeField>& mu_n,
                   std::optional<EdgeField>&& s_src, NodeField&& gauss_rhs_new,
                   const RelaxReport& relax_report);

  RunConfig cfg_;
  GridSpec grid_;
  ModelParams params_;
  EdgeField eps_edges_;
  NodeField eps_nodes_;
  SimState state_;
  StepDiagnostics diag_;
  RelaxReport init_relax_;
  EdgeField prerelax_D_;
  bool mms_ = false;
  int total_steps_ = 0;
};

/// Runs a configured simulation end to end, writing snapshots and the
/// diagnostics time series under the output directory (MANP_OUTPUT_DIR
/// overrides). Numerical failures propagate as NumericalError with the
/// failing step attached.
void run_simulation(const RunConfig& cfg);

/// write one field as CSV (header comment line, then ny rows of nx values)
void write_field_csv(const std::string& path, const NodeField& f,
                     const std::string& name, int step, double time);
void write_edge_csv(const std::string& path, const EdgeField& f, char component,
                    const std::string& name, int step, double time);

struct BenchPoint {
  int n = 0;  // grid points per side
  std::size_t cells = 0;
  double seconds = 0.0;
  int sweeps = 0;
};

/// Times one production relaxation (the step after `warm_steps` steps of a
/// uniform-dielectric run) on each grid size; `repeats` timed repeats on
/// fresh copies, minimum taken.
std::vector<BenchPoint> relax_complexity_bench(const std::vector<int>& sizes,
                                               int warm_steps, int repeats);

/// Least-squares slope of log(seconds) against log(cells).
double loglog_slope(const std::vector<BenchPoint>& pts);

}  // namespace manp
