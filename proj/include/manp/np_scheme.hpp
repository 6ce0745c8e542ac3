#pragma once

#include <optional>
#include <vector>

#include "manp/grid.hpp"
#include "manp/model.hpp"

namespace manp {

/// Bernoulli function B(z) = z/(e^z - 1), B(0) = 1. Series branch below
/// |z| = 1e-4, zero for z > 700; accurate and overflow-free on the whole
/// double range.
double bernoulli(double z);

/// B function of the selected half-point mean:
/// entropic z/(e^z-1), arithmetic (1+e^{-z})/2, geometric e^{-z/2},
/// harmonic 2/(1+e^z). All strictly positive with B(0) = 1.
double b_function(MeanKind kind, double z);

/// Edge increments of the Slotboom exponent for every species:
/// dg^x(i,j) = -dx q^l D^x_{i+1/2,j}/eps^x_{i+1/2,j} + mu^{l,cr}_{i+1,j} - mu^{l,cr}_{i,j},
/// y analogous.
std::vector<EdgeField> compute_dg(const EdgeField& D, const EdgeField& eps_edges,
                                  const std::vector<NodeField>& mu_cr_fields,
                                  const ModelParams& params);

EdgeField compute_dg_species(const EdgeField& D, const EdgeField& eps_edges,
                             const NodeField& mu_cr_field, int q);

/// One implicit NP step in matrix form. Row (i,j) of the operator reads
///   center*c(i,j) + west*c(i-1,j) + east*c(i+1,j) + south*c(i,j-1) + north*c(i,j+1).
/// Columns sum to mass_coeff exactly, which is what conserves mass.
struct NpSystem {
  GridSpec grid;
  NodeField center, west, east, south, north;
  NodeField rhs;
  double mass_coeff = 1.0;
};

/// Builds mass_coeff*I + dt*A where A is the flux-divergence operator for
/// the given edge increments. Euler uses mass_coeff = 1 and rhs = c_old;
/// the BDF2 variant passes mass_coeff = 3/2 and its own rhs.
NpSystem assemble_np_system(const EdgeField& dg, double dt, MeanKind kind,
                            const ModelParams& params, const GridSpec& g,
                            const NodeField& c_old, double mass_coeff = 1.0);

NodeField np_matvec(const NpSystem& sys, const NodeField& x);

struct SolveOptions {
  double tol = 1e-10;                  // relative residual target
  int max_iterations = 0;              // 0 selects 10*nx*ny
  bool require_positive = true;        // postcondition check on the solution
};

/// Jacobi-preconditioned BiCGSTAB. Throws SolverDiverged if the relative
/// residual target is not met within the iteration cap, PositivityLost if
/// require_positive and any solution entry is <= 0.
NodeField solve_np(const NpSystem& sys, const SolveOptions& opts);

inline NodeField solve_np(const NpSystem& sys, double solver_tol) {
  SolveOptions o;
  o.tol = solver_tol;
  return solve_np(sys, o);
}

/// Scharfetter-Gummel numerical fluxes evaluated with the updated
/// concentrations:
///   J^x_{i+1/2,j} = -(kappa/dx) [B(-dg) c(i+1,j) - B(dg) c(i,j)],
/// plus -kappa*g at the half points when a manufactured source is given.
EdgeField compute_fluxes(const NodeField& c_new, const EdgeField& dg,
                         MeanKind kind, const ModelParams& params,
                         const GridSpec& g,
                         const EdgeField* mms_source = nullptr);

}  // namespace manp
