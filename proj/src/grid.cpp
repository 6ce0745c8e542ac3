#include "manp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manp {

GridSpec::GridSpec(int nx_, int ny_, double lx_, double ly_, double x0_,
                   double y0_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), x0(x0_), y0(y0_) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("GridSpec: nx, ny must be >= 2");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("GridSpec: lx, ly must be positive");
  dx = lx / nx;
  dy = ly / ny;
  cell_area = dx * dy;
}

int wrap(int i, int n) { return pidx(i - 1, n) + 1; }

double NodeField::min() const { return *std::min_element(v_.begin(), v_.end()); }
double NodeField::max() const { return *std::max_element(v_.begin(), v_.end()); }

double NodeField::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

double NodeField::sum() const {
  double s = 0.0;
  for (double v : v_) s += v;
  return s;
}

bool NodeField::all_finite() const {
  for (double v : v_)
    if (!std::isfinite(v)) return false;
  return true;
}

double EdgeField::max_abs() const {
  double m = 0.0;
  for (double v : x_) m = std::max(m, std::abs(v));
  for (double v : y_) m = std::max(m, std::abs(v));
  return m;
}

bool EdgeField::all_finite() const {
  for (double v : x_)
    if (!std::isfinite(v)) return false;
  for (double v : y_)
    if (!std::isfinite(v)) return false;
  return true;
}

NodeField node_divergence(const EdgeField& f) {
  const GridSpec& g = f.grid();
  NodeField div(g);
  for (int j = 0; j < g.ny; ++j) {
    const int jm = pidx(j - 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int im = pidx(i - 1, g.nx);
      div(i, j) = (f.x(i, j) - f.x(im, j)) / g.dx + (f.y(i, j) - f.y(i, jm)) / g.dy;
    }
  }
  return div;
}

EdgeField node_gradient(const NodeField& phi) {
  const GridSpec& g = phi.grid();
  EdgeField grad(g);
  for (int j = 0; j < g.ny; ++j) {
    const int jp = pidx(j + 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int ip = pidx(i + 1, g.nx);
      grad.x(i, j) = (phi(ip, j) - phi(i, j)) / g.dx;
      grad.y(i, j) = (phi(i, jp) - phi(i, j)) / g.dy;
    }
  }
  return grad;
}

std::vector<double> cell_circulation(const EdgeField& f) {
  const GridSpec& g = f.grid();
  std::vector<double> circ(static_cast<std::size_t>(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j) {
    const int jp = pidx(j + 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int ip = pidx(i + 1, g.nx);
      circ[static_cast<std::size_t>(i) + static_cast<std::size_t>(g.nx) * j] =
          (f.x(i, j) - f.x(i, jp)) * g.dx + (f.y(ip, j) - f.y(i, j)) * g.dy;
    }
  }
  return circ;
}

}  // namespace manp
