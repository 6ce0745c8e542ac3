#pragma once

#include <optional>
#include <vector>

#include "manp/grid.hpp"
#include "manp/model.hpp"

namespace manp {

/// Previous-step data for the divergence-free extrapolation of Theta.
/// Invalid at n = 0, where Theta falls back to zero. S_prev carries the
/// manufactured Ampere source of the previous step when one is active;
/// without it the extrapolation would not be divergence free.
struct ThetaHistory {
  EdgeField D_prev;
  std::vector<EdgeField> J_prev;
  std::optional<EdgeField> S_prev;
  bool valid = false;
};

/// Theta^n = (D^n - D^{n-1})/dt + [sum_l q^l J^{l,n-1} - S^{n-1}]/(2 kappa^2);
/// the zero field when the history is invalid.
EdgeField theta_extrapolate(const EdgeField& D_n, const ThetaHistory& hist,
                            double dt, const ModelParams& params);

/// Explicit Maxwell-Ampere update:
/// D* = D^n + dt*(-sum_l q^l J^{l,n}/(2 kappa^2) + S/(2 kappa^2) + Theta^n).
EdgeField ampere_step(const EdgeField& D_n, const std::vector<EdgeField>& J_all,
                      const EdgeField& theta, double dt,
                      const ModelParams& params,
                      const EdgeField* mms_source = nullptr);

}  // namespace manp
