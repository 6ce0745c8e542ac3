#include "manp/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "manp/errors.hpp"

namespace manp {

bool StepDiagnostics::all_finite() const {
  for (double m : mass_per_species)
    if (!std::isfinite(m)) return false;
  return std::isfinite(time) && std::isfinite(energy_Fh) &&
         std::isfinite(min_concentration) && std::isfinite(max_gauss_residual) &&
         std::isfinite(max_curl_residual) && std::isfinite(max_peclet) &&
         std::isfinite(dt_star) && std::isfinite(dissipation_I1);
}

std::string diagnostics_csv_header(int num_species) {
  std::string h = "step,time";
  for (int l = 1; l <= num_species; ++l) h += ",mass_" + std::to_string(l);
  h += ",energy,min_concentration,max_gauss_residual,max_curl_residual,"
       "max_peclet,dt_star,dissipation_I1,relax_sweeps";
  return h;
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string diagnostics_csv_row(const StepDiagnostics& d) {
  std::string row = std::to_string(d.step) + "," + fmt(d.time);
  for (double m : d.mass_per_species) row += "," + fmt(m);
  row += "," + fmt(d.energy_Fh) + "," + fmt(d.min_concentration) + "," +
         fmt(d.max_gauss_residual) + "," + fmt(d.max_curl_residual) + "," +
         fmt(d.max_peclet) + "," + fmt(d.dt_star) + "," +
         fmt(d.dissipation_I1) + "," + std::to_string(d.relax_sweeps);
  return row;
}

double total_mass(const NodeField& c, const GridSpec& g) {
  return g.cell_area * c.sum();
}

double discrete_energy(const std::vector<NodeField>& c_all, const EdgeField& D,
                       const EdgeField& eps_edges,
                       const std::vector<NodeField>& mu_cr_all,
                       const ModelParams& params, const GridSpec& g) {
  double field = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      field += D.x(i, j) * D.x(i, j) / eps_edges.x(i, j) +
               D.y(i, j) * D.y(i, j) / eps_edges.y(i, j);
  field *= params.kappa * params.kappa;

  double entropy = 0.0;
  for (int l = 0; l < params.num_species(); ++l) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double c = c_all[l](i, j);
        if (!(c > 0.0))
          throw NonPositiveConcentration("discrete energy needs c > 0");
        entropy += c * (std::log(c) + mu_cr_all[l](i, j));
      }
    }
  }
  return g.cell_area * (field + entropy);
}

double min_concentration(const std::vector<NodeField>& c_all) {
  double m = c_all.at(0).min();
  for (std::size_t l = 1; l < c_all.size(); ++l) m = std::min(m, c_all[l].min());
  return m;
}

NodeField gauss_residual(const EdgeField& D, const std::vector<NodeField>& c_all,
                         const NodeField& rho_f, const ModelParams& params,
                         const GridSpec& g) {
  NodeField div = node_divergence(D);
  const double two_k2 = 2.0 * params.kappa * params.kappa;
  NodeField res(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double rho = rho_f.empty() ? 0.0 : rho_f(i, j);
      for (int l = 0; l < params.num_species(); ++l)
        rho += params.species[l].q * c_all[l](i, j);
      res(i, j) = two_k2 * div(i, j) - rho;
    }
  }
  return res;
}

std::vector<double> curl_residual(const EdgeField& D, const EdgeField& eps_edges,
                                  const GridSpec& g) {
  EdgeField w(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      w.x(i, j) = D.x(i, j) / eps_edges.x(i, j);
      w.y(i, j) = D.y(i, j) / eps_edges.y(i, j);
    }
  }
  return cell_circulation(w);
}

NodeField peclet_field(const std::vector<EdgeField>& dg_all) {
  const GridSpec& g = dg_all.at(0).grid();
  NodeField pe(g);
  for (const EdgeField& dg : dg_all)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        pe(i, j) = std::max(pe(i, j),
                            std::max(std::abs(dg.x(i, j)), std::abs(dg.y(i, j))));
  return pe;
}

double dt_star(const std::vector<EdgeField>& dg_all,
               const std::vector<NodeField>& c_new, const EdgeField& eps_edges,
               const ModelParams& params) {
  double eps_min = eps_edges.x(0, 0), eps_max = eps_min;
  const GridSpec& g = eps_edges.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      eps_min = std::min({eps_min, eps_edges.x(i, j), eps_edges.y(i, j)});
      eps_max = std::max({eps_max, eps_edges.x(i, j), eps_edges.y(i, j)});
    }
  }
  double c_max = 0.0;
  for (const NodeField& c : c_new) c_max = std::max(c_max, c.max());
  double q2_sum = 0.0;
  for (const SpeciesParams& sp : params.species)
    q2_sum += static_cast<double>(sp.q) * sp.q;
  double dg_max = 0.0;
  for (const EdgeField& dg : dg_all) dg_max = std::max(dg_max, dg.max_abs());

  return 2.0 * params.kappa * eps_min * eps_min * eps_min /
         (eps_max * eps_max * c_max * q2_sum) * std::exp(-dg_max);
}

double dissipation_rate_I1(const std::vector<EdgeField>& J_all,
                           const std::vector<NodeField>& c_new,
                           const std::vector<NodeField>& mu_cr_all,
                           const EdgeField& D, const EdgeField& eps_edges,
                           const ModelParams& params, const GridSpec& g) {
  double sum = 0.0;
  for (int l = 0; l < params.num_species(); ++l) {
    const double q = params.species[l].q;
    const NodeField& c = c_new[l];
    const NodeField& mu = mu_cr_all[l];
    for (int j = 0; j < g.ny; ++j) {
      const int jp = pidx(j + 1, g.ny);
      for (int i = 0; i < g.nx; ++i) {
        const int ip = pidx(i + 1, g.nx);
        if (!(c(i, j) > 0.0))
          throw NonPositiveConcentration("I1 needs positive concentrations");
        const double fx = (std::log(c(ip, j)) - std::log(c(i, j)) + mu(ip, j) -
                           mu(i, j)) / g.dx -
                          q * D.x(i, j) / eps_edges.x(i, j);
        const double fy = (std::log(c(i, jp)) - std::log(c(i, j)) + mu(i, jp) -
                           mu(i, j)) / g.dy -
                          q * D.y(i, j) / eps_edges.y(i, j);
        sum += J_all[l].x(i, j) * fx + J_all[l].y(i, j) * fy;
      }
    }
  }
  return -g.cell_area * sum;
}

}  // namespace manp
