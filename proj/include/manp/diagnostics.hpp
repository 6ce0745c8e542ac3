#pragma once

#include <string>
#include <vector>

#include "manp/grid.hpp"
#include "manp/model.hpp"

namespace manp {

/// One row of the per-step time series.
struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  std::vector<double> mass_per_species;
  double energy_Fh = 0.0;
  double min_concentration = 0.0;
  double max_gauss_residual = 0.0;
  double max_curl_residual = 0.0;
  double max_peclet = 0.0;
  double dt_star = 0.0;
  double dissipation_I1 = 0.0;
  int relax_sweeps = 0;

  bool all_finite() const;
};

std::string diagnostics_csv_header(int num_species);
std::string diagnostics_csv_row(const StepDiagnostics& d);

/// cell_area * sum c_{i,j}.
double total_mass(const NodeField& c, const GridSpec& g);

/// Discrete free energy: field part + sum_l c^l (log c^l + mu^{l,cr}).
/// Throws NonPositiveConcentration when a log argument is <= 0.
double discrete_energy(const std::vector<NodeField>& c_all, const EdgeField& D,
                       const EdgeField& eps_edges,
                       const std::vector<NodeField>& mu_cr_all,
                       const ModelParams& params, const GridSpec& g);

double min_concentration(const std::vector<NodeField>& c_all);

/// 2 kappa^2 * node_divergence(D) - (sum_l q^l c^l + rho^f), pointwise.
NodeField gauss_residual(const EdgeField& D, const std::vector<NodeField>& c_all,
                         const NodeField& rho_f, const ModelParams& params,
                         const GridSpec& g);

/// Per-cell circulation of D/eps.
std::vector<double> curl_residual(const EdgeField& D, const EdgeField& eps_edges,
                                  const GridSpec& g);

/// Numerical cell Peclet number: per node, max over species of
/// max(|dg_{i+1/2,j}|, |dg_{i,j+1/2}|).
NodeField peclet_field(const std::vector<EdgeField>& dg_all);

/// Time-step bound of the discrete energy dissipation law:
/// 2 kappa eps_min^3 / (eps_max^2 c_max sum_l |q^l|^2) * exp(-max |dg|),
/// with c_max over the updated concentrations.
double dt_star(const std::vector<EdgeField>& dg_all,
               const std::vector<NodeField>& c_new, const EdgeField& eps_edges,
               const ModelParams& params);

/// The dissipation rate I_1: minus the sum over species and edges of
/// J * (grad_h(log c + mu_cr) - q D/eps), scaled by the cell area.
double dissipation_rate_I1(const std::vector<EdgeField>& J_all,
                           const std::vector<NodeField>& c_new,
                           const std::vector<NodeField>& mu_cr_all,
                           const EdgeField& D, const EdgeField& eps_edges,
                           const ModelParams& params, const GridSpec& g);

}  // namespace manp
