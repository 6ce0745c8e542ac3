#include "manp/np_scheme.hpp"

#include <cmath>
#include <cstdio>
#include <vector>
#include <string>

#include "manp/errors.hpp"

namespace manp {

namespace {

inline double exp_clamped(double z) { return std::exp(std::min(z, 700.0)); }

}  // namespace

double bernoulli(double z) {
  const double az = std::abs(z);
  if (az < 1e-4) {
    const double z2 = z * z;
    return 1.0 - 0.5 * z + z2 / 12.0 - z2 * z2 / 720.0;
  }
  if (z > 700.0) return 0.0;
  return z / std::expm1(z);
}

double b_function(MeanKind kind, double z) {
  switch (kind) {
    case MeanKind::entropic:
      return bernoulli(z);
    case MeanKind::arithmetic:
      return 0.5 * (1.0 + exp_clamped(-z));
    case MeanKind::geometric:
      return exp_clamped(-0.5 * z);
    case MeanKind::harmonic:
      return 2.0 / (1.0 + std::exp(z));  // overflows to inf -> 0, still fine
  }
  return 1.0;
}

EdgeField compute_dg_species(const EdgeField& D, const EdgeField& eps_edges,
                             const NodeField& mu_cr_field, int q) {
  const GridSpec& g = D.grid();
  EdgeField dg(g);
  for (int j = 0; j < g.ny; ++j) {
    const int jp = pidx(j + 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int ip = pidx(i + 1, g.nx);
      dg.x(i, j) = -g.dx * q * D.x(i, j) / eps_edges.x(i, j) +
                   mu_cr_field(ip, j) - mu_cr_field(i, j);
      dg.y(i, j) = -g.dy * q * D.y(i, j) / eps_edges.y(i, j) +
                   mu_cr_field(i, jp) - mu_cr_field(i, j);
    }
  }
  return dg;
}

std::vector<EdgeField> compute_dg(const EdgeField& D, const EdgeField& eps_edges,
                                  const std::vector<NodeField>& mu_cr_fields,
                                  const ModelParams& params) {
  std::vector<EdgeField> out;
  out.reserve(params.species.size());
  for (int l = 0; l < params.num_species(); ++l)
    out.push_back(compute_dg_species(D, eps_edges, mu_cr_fields.at(l),
                                     params.species[l].q));
  return out;
}

NpSystem assemble_np_system(const EdgeField& dg, double dt, MeanKind kind,
                            const ModelParams& params, const GridSpec& g,
                            const NodeField& c_old, double mass_coeff) {
  NpSystem sys;
  sys.grid = g;
  sys.mass_coeff = mass_coeff;
  sys.center = NodeField(g);
  sys.west = NodeField(g);
  sys.east = NodeField(g);
  sys.south = NodeField(g);
  sys.north = NodeField(g);
  sys.rhs = c_old;

  const double ax = dt * params.kappa / (g.dx * g.dx);
  const double ay = dt * params.kappa / (g.dy * g.dy);

  // B(+dg) and B(-dg) per edge, shared by the diagonal and its mirrors.
  EdgeField bp(g), bm(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      bp.x(i, j) = b_function(kind, dg.x(i, j));
      bm.x(i, j) = b_function(kind, -dg.x(i, j));
      bp.y(i, j) = b_function(kind, dg.y(i, j));
      bm.y(i, j) = b_function(kind, -dg.y(i, j));
    }
  }

  for (int j = 0; j < g.ny; ++j) {
    const int jm = pidx(j - 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int im = pidx(i - 1, g.nx);
      sys.east(i, j) = -ax * bm.x(i, j);
      sys.west(i, j) = -ax * bp.x(im, j);
      sys.north(i, j) = -ay * bm.y(i, j);
      sys.south(i, j) = -ay * bp.y(i, jm);
      sys.center(i, j) = mass_coeff + ax * (bp.x(i, j) + bm.x(im, j)) +
                         ay * (bp.y(i, j) + bm.y(i, jm));
    }
  }
  return sys;
}

NodeField np_matvec(const NpSystem& sys, const NodeField& x) {
  const GridSpec& g = sys.grid;
  NodeField y(g);
  for (int j = 0; j < g.ny; ++j) {
    const int jm = pidx(j - 1, g.ny);
    const int jp = pidx(j + 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int im = pidx(i - 1, g.nx);
      const int ip = pidx(i + 1, g.nx);
      y(i, j) = sys.center(i, j) * x(i, j) + sys.west(i, j) * x(im, j) +
                sys.east(i, j) * x(ip, j) + sys.south(i, j) * x(i, jm) +
                sys.north(i, j) * x(i, jp);
    }
  }
  return y;
}

namespace {

double dot(const NodeField& a, const NodeField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(const NodeField& a) { return std::sqrt(dot(a, a)); }

}  // namespace

namespace {

/// Plain Jacobi-preconditioned BiCGSTAB toward an absolute l2 residual
/// target; returns with whatever it achieved, spending at most `cap`
/// iterations. `iters_left` is decremented by the iterations used.
void bicgstab(const NpSystem& sys, const NodeField& b, NodeField& x,
              const NodeField& inv_diag, double abs_target, int& iters_left) {
  const GridSpec& g = sys.grid;
  const std::size_t n = b.size();

  NodeField r = np_matvec(sys, x);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
  double rnorm = norm2(r);
  if (rnorm <= abs_target) return;

  NodeField rhat = r;
  NodeField p(g), v(g), s(g), t(g), phat(g), shat(g);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  bool fresh = true;
  double stall_best = rnorm;
  int stall_count = 0;

  while (iters_left > 0 && rnorm > abs_target) {
    --iters_left;
    const double rho1 = dot(rhat, r);
    if (std::abs(rho1) < 1e-300 || (!fresh && std::abs(omega) < 1e-300)) {
      rhat = r;
      p = NodeField(g);
      v = NodeField(g);
      rho = alpha = omega = 1.0;
      fresh = true;
      continue;
    }
    if (fresh) {
      p = r;
      fresh = false;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      for (std::size_t k = 0; k < n; ++k)
        p[k] = r[k] + beta * (p[k] - omega * v[k]);
    }
    rho = rho1;
    for (std::size_t k = 0; k < n; ++k) phat[k] = inv_diag[k] * p[k];
    v = np_matvec(sys, phat);
    const double rhv = dot(rhat, v);
    if (std::abs(rhv) < 1e-300) {
      rhat = r;
      p = NodeField(g);
      v = NodeField(g);
      rho = alpha = omega = 1.0;
      fresh = true;
      continue;
    }
    alpha = rho / rhv;
    for (std::size_t k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
    if (norm2(s) <= abs_target) {
      for (std::size_t k = 0; k < n; ++k) x[k] += alpha * phat[k];
      return;
    }
    for (std::size_t k = 0; k < n; ++k) shat[k] = inv_diag[k] * s[k];
    t = np_matvec(sys, shat);
    const double tt = dot(t, t);
    if (tt < 1e-300) {
      rhat = r;
      p = NodeField(g);
      v = NodeField(g);
      rho = alpha = omega = 1.0;
      fresh = true;
      continue;
    }
    omega = dot(t, s) / tt;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * phat[k] + omega * shat[k];
      r[k] = s[k] - omega * t[k];
    }
    rnorm = norm2(r);
    if (!std::isfinite(rnorm)) return;
    // bail out once the recurrence stops making progress
    if (rnorm < 0.5 * stall_best) {
      stall_best = rnorm;
      stall_count = 0;
    } else if (++stall_count > 50) {
      return;
    }
  }
}

}  // namespace

NodeField solve_np(const NpSystem& sys, const SolveOptions& opts) {
  const GridSpec& g = sys.grid;
  const std::size_t n = sys.rhs.size();
  int iters_left =
      opts.max_iterations > 0 ? opts.max_iterations : 10 * g.nx * g.ny;


  const NodeField& b = sys.rhs;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return NodeField(g, 0.0);
  const double target = opts.tol * bnorm;

  NodeField inv_diag(g);
  for (std::size_t k = 0; k < n; ++k) inv_diag[k] = 1.0 / sys.center[k];

  NodeField x = b;
  bicgstab(sys, b, x, inv_diag, target, iters_left);

  // iterative refinement: re-solve on the residual until the target holds;
  // this pushes past the stagnation floor of a single Krylov call
  NodeField r = np_matvec(sys, x);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
  double rnorm = norm2(r);
  for (int pass = 0; pass < 6 && rnorm > target && iters_left > 0; ++pass) {
    NodeField e(g, 0.0);
    bicgstab(sys, r, e, inv_diag, std::max(target * 0.3, rnorm * 1e-4),
             iters_left);
    for (std::size_t k = 0; k < n; ++k) x[k] += e[k];
    r = np_matvec(sys, x);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - r[k];
    const double rnew = norm2(r);
    if (rnew >= 0.9 * rnorm) break;  // refinement has hit the floor
    rnorm = rnew;
  }

  if (!(rnorm <= target) || !x.all_finite()) {
    char msg[128];
    if (std::isfinite(rnorm))
      std::snprintf(msg, sizeof msg,
                    "NP solve: relative residual %.3e above tolerance %.3e",
                    rnorm / bnorm, opts.tol);
    else
      std::snprintf(msg, sizeof msg,
                    "NP solve: iteration overflowed (stencil coefficients "
                    "out of iterative range)");
    throw SolverDiverged(msg);
  }

  if (opts.require_positive) {
    for (std::size_t k = 0; k < n; ++k)
      if (!(x[k] > 0.0))
        throw PositivityLost("NP solve produced a nonpositive concentration");
  }
  return x;
}

EdgeField compute_fluxes(const NodeField& c_new, const EdgeField& dg,
                         MeanKind kind, const ModelParams& params,
                         const GridSpec& g, const EdgeField* mms_source) {
  EdgeField flux(g);
  const double kx = params.kappa / g.dx;
  const double ky = params.kappa / g.dy;
  for (int j = 0; j < g.ny; ++j) {
    const int jp = pidx(j + 1, g.ny);
    for (int i = 0; i < g.nx; ++i) {
      const int ip = pidx(i + 1, g.nx);
      flux.x(i, j) = -kx * (b_function(kind, -dg.x(i, j)) * c_new(ip, j) -
                            b_function(kind, dg.x(i, j)) * c_new(i, j));
      flux.y(i, j) = -ky * (b_function(kind, -dg.y(i, j)) * c_new(i, jp) -
                            b_function(kind, dg.y(i, j)) * c_new(i, j));
      if (mms_source) {
        flux.x(i, j) -= params.kappa * mms_source->x(i, j);
        flux.y(i, j) -= params.kappa * mms_source->y(i, j);
      }
    }
  }
  return flux;
}

}  // namespace manp
