#include "manp/ampere.hpp"

namespace manp {

EdgeField theta_extrapolate(const EdgeField& D_n, const ThetaHistory& hist,
                            double dt, const ModelParams& params) {
  const GridSpec& g = D_n.grid();
  EdgeField theta(g);
  if (!hist.valid) return theta;

  const double inv_2k2 = 1.0 / (2.0 * params.kappa * params.kappa);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double cx = 0.0, cy = 0.0;
      for (int l = 0; l < params.num_species(); ++l) {
        cx += params.species[l].q * hist.J_prev[l].x(i, j);
        cy += params.species[l].q * hist.J_prev[l].y(i, j);
      }
      if (hist.S_prev) {
        cx -= hist.S_prev->x(i, j);
        cy -= hist.S_prev->y(i, j);
      }
      theta.x(i, j) = (D_n.x(i, j) - hist.D_prev.x(i, j)) / dt + cx * inv_2k2;
      theta.y(i, j) = (D_n.y(i, j) - hist.D_prev.y(i, j)) / dt + cy * inv_2k2;
    }
  }
  return theta;
}

EdgeField ampere_step(const EdgeField& D_n, const std::vector<EdgeField>& J_all,
                      const EdgeField& theta, double dt,
                      const ModelParams& params, const EdgeField* mms_source) {
  const GridSpec& g = D_n.grid();
  EdgeField D_star(g);
  const double inv_2k2 = 1.0 / (2.0 * params.kappa * params.kappa);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double cx = 0.0, cy = 0.0;
      for (int l = 0; l < params.num_species(); ++l) {
        cx += params.species[l].q * J_all[l].x(i, j);
        cy += params.species[l].q * J_all[l].y(i, j);
      }
      if (mms_source) {
        cx -= mms_source->x(i, j);
        cy -= mms_source->y(i, j);
      }
      D_star.x(i, j) = D_n.x(i, j) + dt * (-cx * inv_2k2 + theta.x(i, j));
      D_star.y(i, j) = D_n.y(i, j) + dt * (-cy * inv_2k2 + theta.y(i, j));
    }
  }
  return D_star;
}

}  // namespace manp
