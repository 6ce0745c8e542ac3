#include "manp/curlfree.hpp"

#include <cmath>

namespace manp {

double optimal_eta(int i, int j, const EdgeField& D, const EdgeField& eps,
                   const GridSpec& g) {
  const int ip = pidx(i + 1, g.nx);
  const int jp = pidx(j + 1, g.ny);
  const double dx2 = g.dx * g.dx;
  const double dy2 = g.dy * g.dy;
  const double num =
      g.dy * dx2 * (D.x(i, j) / eps.x(i, j) - D.x(i, jp) / eps.x(i, jp)) +
      g.dx * dy2 * (D.y(ip, j) / eps.y(ip, j) - D.y(i, j) / eps.y(i, j));
  const double den = dx2 * (1.0 / eps.x(i, j) + 1.0 / eps.x(i, jp)) +
                     dy2 * (1.0 / eps.y(i, j) + 1.0 / eps.y(ip, j));
  return -num / den;
}

void apply_cell_update(int i, int j, double eta, EdgeField& D,
                       const GridSpec& g) {
  const int ip = pidx(i + 1, g.nx);
  const int jp = pidx(j + 1, g.ny);
  D.x(i, j) += eta / g.dy;
  D.y(ip, j) += eta / g.dx;
  D.x(i, jp) -= eta / g.dy;
  D.y(i, j) -= eta / g.dx;
}

RelaxReport relax(EdgeField& D, const EdgeField& eps, double eps_tol,
                  int max_sweeps, double kappa) {
  const GridSpec& g = D.grid();
  const int nx = g.nx, ny = g.ny;
  const std::size_t n = static_cast<std::size_t>(nx) * ny;

  std::vector<double>& dx_arr = D.x_values();
  std::vector<double>& dy_arr = D.y_values();

  // Per-cell constants: scaled inverse permittivities and the inverse of
  // the eta denominator. The bottom/top coefficients carry dy*dx^2, the
  // left/right ones dx*dy^2.
  std::vector<double> cx(n), cy(n), inv_den(n);
  {
    const double dx2 = g.dx * g.dx, dy2 = g.dy * g.dy;
    for (int j = 0; j < ny; ++j) {
      const int jp = pidx(j + 1, ny);
      for (int i = 0; i < nx; ++i) {
        const int ip = pidx(i + 1, nx);
        const std::size_t k = i + static_cast<std::size_t>(nx) * j;
        cx[k] = g.dy * dx2 / eps.x(i, j);
        cy[k] = g.dx * dy2 / eps.y(i, j);
        inv_den[k] = 1.0 / (dx2 * (1.0 / eps.x(i, j) + 1.0 / eps.x(i, jp)) +
                            dy2 * (1.0 / eps.y(i, j) + 1.0 / eps.y(ip, j)));
      }
    }
  }

  std::vector<int> ip1(nx), jp1(ny);
  for (int i = 0; i < nx; ++i) ip1[i] = pidx(i + 1, nx);
  for (int j = 0; j < ny; ++j) jp1[j] = pidx(j + 1, ny);

  const double inv_dx = 1.0 / g.dx, inv_dy = 1.0 / g.dy;

  auto field_energy = [&]() {
    double e = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        e += D.x(i, j) * D.x(i, j) / eps.x(i, j) +
             D.y(i, j) * D.y(i, j) / eps.y(i, j);
    return g.cell_area * kappa * kappa * e;
  };

  RelaxReport report;
  double metric = 0.0;
  while (report.sweeps < max_sweeps) {
    metric = 0.0;
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = static_cast<std::size_t>(nx) * j;
      const std::size_t row_up = static_cast<std::size_t>(nx) * jp1[j];
      for (int i = 0; i < nx; ++i) {
        const std::size_t k = row + i;
        const std::size_t k_up = row_up + i;
        const std::size_t k_right = row + ip1[i];
        const double eta = -(cx[k] * dx_arr[k] - cx[k_up] * dx_arr[k_up] +
                             cy[k_right] * dy_arr[k_right] - cy[k] * dy_arr[k]) *
                           inv_den[k];
        dx_arr[k] += eta * inv_dy;
        dy_arr[k_right] += eta * inv_dx;
        dx_arr[k_up] -= eta * inv_dy;
        dy_arr[k] -= eta * inv_dx;
        const double aeta = std::abs(eta);
        if (aeta > metric) metric = aeta;
      }
    }
    ++report.sweeps;
    report.energy_trace.push_back(field_energy());
    if (metric <= eps_tol) break;
  }
  report.final_metric = metric;
  report.converged = metric <= eps_tol;
  return report;
}

double potential_energy(const EdgeField& D, const EdgeField& eps,
                        const ModelParams& params, const GridSpec& g) {
  double e = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      e += D.x(i, j) * D.x(i, j) / eps.x(i, j) +
           D.y(i, j) * D.y(i, j) / eps.y(i, j);
  return g.cell_area * params.kappa * params.kappa * e;
}

}  // namespace manp
