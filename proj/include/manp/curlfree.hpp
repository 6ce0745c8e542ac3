#pragma once

#include <vector>

#include "manp/grid.hpp"
#include "manp/model.hpp"

namespace manp {

/// Outcome of one relaxation call. energy_trace holds the discrete field
/// energy after every sweep and is non-increasing by construction of the
/// optimal flux.
struct RelaxReport {
  int sweeps = 0;
  double final_metric = 0.0;
  std::vector<double> energy_trace;
  bool converged = false;
};

/// Optimal update flux for the cell with lower-left node (i,j): the exact
/// minimizer of the local field energy, which also zeroes that cell's
/// circulation of D/eps when eps is uniform over its four edges.
double optimal_eta(int i, int j, const EdgeField& D, const EdgeField& eps,
                   const GridSpec& g);

/// Circulatory cell update; leaves node_divergence(D) unchanged at all
/// four corner nodes.
void apply_cell_update(int i, int j, double eta, EdgeField& D,
                       const GridSpec& g);

/// Gauss-Seidel style sweeps over cells in row-major order, in place.
/// Stops once the in-sweep max |eta| drops to eps_tol or the sweep cap is
/// reached (converged flag reports which; the caller decides whether a
/// cap hit is fatal).
RelaxReport relax(EdgeField& D, const EdgeField& eps, double eps_tol,
                  int max_sweeps, double kappa = 1.0);

/// cell_area * kappa^2 * sum_{i,j} (D_x^2/eps_x + D_y^2/eps_y).
double potential_energy(const EdgeField& D, const EdgeField& eps,
                        const ModelParams& params, const GridSpec& g);

}  // namespace manp
