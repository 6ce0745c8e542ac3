#pragma once

// Test-only oracles: dense constructions and direct solves kept independent
// of the library's iterative paths.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "manp/grid.hpp"
#include "manp/np_scheme.hpp"

namespace manp::test {

using Dense = std::vector<double>;  // row-major n*n

inline std::size_t flat(const GridSpec& g, int i, int j) {
  return static_cast<std::size_t>(pidx(i, g.nx)) + g.nx * pidx(j, g.ny);
}

/// Dense matrix from the five stored diagonals, accumulating so that
/// nx = 2 or ny = 2 (coincident neighbors) stays correct.
inline Dense dense_from_system(const NpSystem& sys) {
  const GridSpec& g = sys.grid;
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
  Dense a(n * n, 0.0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t r = flat(g, i, j);
      a[r * n + flat(g, i, j)] += sys.center(i, j);
      a[r * n + flat(g, i - 1, j)] += sys.west(i, j);
      a[r * n + flat(g, i + 1, j)] += sys.east(i, j);
      a[r * n + flat(g, i, j - 1)] += sys.south(i, j);
      a[r * n + flat(g, i, j + 1)] += sys.north(i, j);
    }
  }
  return a;
}

/// Independent construction of the same operator from the flux definitions:
/// column k is e_k + dt * div J(e_k) (+ (mass_coeff-1) e_k), evaluated with
/// compute_fluxes and node_divergence only.
inline Dense dense_from_fluxes(const EdgeField& dg, double dt, MeanKind kind,
                               const ModelParams& params, const GridSpec& g,
                               double mass_coeff = 1.0) {
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
  Dense a(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    NodeField basis(g, 0.0);
    basis[k] = 1.0;
    EdgeField flux = compute_fluxes(basis, dg, kind, params, g);
    NodeField div = node_divergence(flux);
    for (std::size_t r = 0; r < n; ++r)
      a[r * n + k] = (r == k ? mass_coeff : 0.0) + dt * div[r];
  }
  return a;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw std::invalid_argument("dense_solve: shape");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double piv_abs = std::abs(a[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + k]);
      if (v > piv_abs) {
        piv_abs = v;
        piv = r;
      }
    }
    if (!(piv_abs > 0.0)) throw std::runtime_error("dense_solve: singular");
    if (piv != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      std::swap(b[k], b[piv]);
    }
    const double inv = 1.0 / a[k * n + k];
    for (std::size_t r = k + 1; r < n; ++r) {
      const double m = a[r * n + k] * inv;
      if (m == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) a[r * n + c] -= m * a[k * n + c];
      b[r] -= m * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= a[k * n + c] * b[c];
    b[k] = s / a[k * n + k];
  }
  return b;
}

/// Direct solve of the variable-coefficient constraint problem: finds the
/// energy minimizer D = -eps grad(phi) with 2 kappa^2 div D = r, by dense
/// factorization of -2 kappa^2 div(eps grad phi) = r with phi(0,0) pinned.
inline EdgeField poisson_oracle(const NodeField& r, const EdgeField& eps,
                                double kappa) {
  const GridSpec& g = r.grid();
  const std::size_t n = r.size();
  Dense a(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    NodeField basis(g, 0.0);
    basis[k] = 1.0;
    EdgeField e = node_gradient(basis);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        e.x(i, j) *= eps.x(i, j);
        e.y(i, j) *= eps.y(i, j);
      }
    }
    NodeField div = node_divergence(e);
    for (std::size_t row = 0; row < n; ++row)
      a[row * n + k] = -2.0 * kappa * kappa * div[row];
  }
  std::vector<double> b(n);
  for (std::size_t k = 0; k < n; ++k) b[k] = r[k];
  // pin the constant mode (rhs is compatible by construction)
  for (std::size_t c = 0; c < n; ++c) a[0 * n + c] = (c == 0) ? 1.0 : 0.0;
  b[0] = 0.0;
  std::vector<double> phi_flat = dense_solve(std::move(a), std::move(b));

  NodeField phi(g);
  phi.values() = std::move(phi_flat);
  EdgeField d = node_gradient(phi);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      d.x(i, j) *= -eps.x(i, j);
      d.y(i, j) *= -eps.y(i, j);
    }
  }
  return d;
}

/// The relaxation conserves the global sums of both displacement
/// components (the torus's two harmonic degrees of freedom), so the
/// comparable oracle is -eps grad(phi) plus the harmonic family member
/// matching those sums. The family is V(a,b) = eps (-grad psi + (a,b))
/// with div V = 0.
inline EdgeField poisson_oracle_matched(const NodeField& r, const EdgeField& eps,
                                        double kappa, double sum_x,
                                        double sum_y) {
  const GridSpec& g = r.grid();
  EdgeField base = poisson_oracle(r, eps, kappa);

  auto harmonic = [&](double ax, double ay) {
    EdgeField unit(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        unit.x(i, j) = ax * eps.x(i, j);
        unit.y(i, j) = ay * eps.y(i, j);
      }
    NodeField div_unit = node_divergence(unit);
    NodeField rt(g);
    for (std::size_t k = 0; k < rt.size(); ++k)
      rt[k] = -2.0 * kappa * kappa * div_unit[k];
    EdgeField w = poisson_oracle(rt, eps, kappa);  // div w = -div(unit)
    for (std::size_t k = 0; k < w.size(); ++k) {
      w.x_values()[k] += unit.x_values()[k];
      w.y_values()[k] += unit.y_values()[k];
    }
    return w;
  };

  EdgeField va = harmonic(1.0, 0.0);
  EdgeField vb = harmonic(0.0, 1.0);
  auto total = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  const double m00 = total(va.x_values()), m01 = total(vb.x_values());
  const double m10 = total(va.y_values()), m11 = total(vb.y_values());
  const double bx = sum_x - total(base.x_values());
  const double by = sum_y - total(base.y_values());
  const double det = m00 * m11 - m01 * m10;
  const double a = (bx * m11 - m01 * by) / det;
  const double b = (m00 * by - bx * m10) / det;
  for (std::size_t k = 0; k < base.size(); ++k) {
    base.x_values()[k] += a * va.x_values()[k] + b * vb.x_values()[k];
    base.y_values()[k] += a * va.y_values()[k] + b * vb.y_values()[k];
  }
  return base;
}

inline NodeField random_node_field(const GridSpec& g, std::mt19937& rng,
                                   double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  NodeField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(rng);
  return f;
}

inline EdgeField random_edge_field(const GridSpec& g, std::mt19937& rng,
                                   double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  EdgeField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f.x_values()[k] = dist(rng);
    f.y_values()[k] = dist(rng);
  }
  return f;
}

inline ModelParams simple_params(double kappa, std::vector<int> valences) {
  ModelParams p;
  p.kappa = kappa;
  for (int q : valences) p.species.push_back(SpeciesParams{q, 0.0, 0.0});
  return p;
}

}  // namespace manp::test
