#pragma once

#include <array>
#include <vector>

#include "manp/grid.hpp"
#include "manp/model.hpp"

namespace manp {
namespace mms {

// Fixed manufactured case: [-1,1]^2, eps = 0.5, kappa = 1, two species with
// q = +1/-1 and no correlation terms.
inline constexpr double kEps = 0.5;
inline constexpr double kKappa = 1.0;
inline constexpr int kNumSpecies = 2;

double exact_c(double x, double y, double t);
std::array<double, 2> exact_D(double x, double y, double t);

/// Flux sources g^l (l = 0, 1) entering J^l = -kappa(grad c - q c D/eps + g^l).
std::array<double, 2> source_g(int ell, double x, double y, double t);

/// Ampere source S entering dD/dt = ... + S/(2 kappa^2).
std::array<double, 2> source_S(double x, double y, double t);

/// Samples c^1, c^2 at nodes and D at the half points.
void exact_fields(double t, const GridSpec& g, std::vector<NodeField>& c,
                  EdgeField& D);

/// Samples g^1, g^2 and S at the half points.
void sample_sources(double t, const GridSpec& g, std::vector<EdgeField>& g_all,
                    EdgeField& S);

/// Max node |a - b|; fields must share one grid.
double linf_error(const NodeField& a, const NodeField& b);

ModelParams make_params();

enum class DtRule { dt_h_over_10, dt_h_squared };

struct ConvergenceRow {
  double h = 0.0;
  double err_c1 = 0.0;
  double order_c1 = 0.0;
  double err_c2 = 0.0;
  double order_c2 = 0.0;
};

/// Runs the full pipeline from exact initial data on each mesh, measuring
/// the final-time max errors and successive orders log2(e_{2h}/e_h).
/// eps_tol follows the study schedule: 1e-6, tightened to 1e-7 for
/// h <= 0.0125.
std::vector<ConvergenceRow> convergence_study(const std::vector<double>& hs,
                                              DtRule rule, double T);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace mms
}  // namespace manp
