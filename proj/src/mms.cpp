#include "manp/mms.hpp"

#include <cmath>
#include <cstdio>

#include "manp/simulation.hpp"

namespace manp {
namespace mms {

namespace {
const double kPi = std::acos(-1.0);
}

double exact_c(double x, double y, double t) {
  return kPi * kPi * std::exp(-t) * std::cos(kPi * x) * std::cos(kPi * y) / 5.0 +
         2.0;
}

std::array<double, 2> exact_D(double x, double y, double t) {
  const double a = kPi * std::exp(-t) / 2.0;
  return {a * std::sin(kPi * x) * std::cos(kPi * y),
          a * std::cos(kPi * x) * std::sin(kPi * y)};
}

std::array<double, 2> source_g(int ell, double x, double y, double t) {
  const double e1 = std::exp(-t);
  const double e2 = std::exp(-2.0 * t);
  const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
  const double cy = std::cos(kPi * y);
  const double pi3 = kPi * kPi * kPi;
  const double cross_x = pi3 / 10.0 * e2 * std::sin(2.0 * kPi * x) * cy * cy;
  const double cross_y = pi3 / 10.0 * e2 * cx * cx * std::sin(2.0 * kPi * y);
  if (ell == 0)
    return {(2.0 * pi3 / 5.0 + 4.0 * kPi - kPi / 5.0) * e1 * sx * cy + cross_x,
            cross_y};
  return {(2.0 * pi3 / 5.0 - 4.0 * kPi - kPi / 5.0) * e1 * sx * cy - cross_x,
          -cross_y};
}

std::array<double, 2> source_S(double x, double y, double t) {
  return {-2.0 * kPi * std::exp(-t) * std::sin(kPi * x) * std::cos(kPi * y), 0.0};
}

void exact_fields(double t, const GridSpec& g, std::vector<NodeField>& c,
                  EdgeField& D) {
  c.assign(kNumSpecies, NodeField(g));
  D = EdgeField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double val = exact_c(g.node_x(i), g.node_y(j), t);
      c[0](i, j) = val;
      c[1](i, j) = val;
      D.x(i, j) = exact_D(D.half_x(i), g.node_y(j), t)[0];
      D.y(i, j) = exact_D(g.node_x(i), D.half_y(j), t)[1];
    }
  }
}

void sample_sources(double t, const GridSpec& g, std::vector<EdgeField>& g_all,
                    EdgeField& S) {
  g_all.assign(kNumSpecies, EdgeField(g));
  S = EdgeField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double hx = g_all[0].half_x(i);
      const double hy = g_all[0].half_y(j);
      for (int l = 0; l < kNumSpecies; ++l) {
        g_all[l].x(i, j) = source_g(l, hx, g.node_y(j), t)[0];
        g_all[l].y(i, j) = source_g(l, g.node_x(i), hy, t)[1];
      }
      S.x(i, j) = source_S(hx, g.node_y(j), t)[0];
      S.y(i, j) = source_S(g.node_x(i), hy, t)[1];
    }
  }
}

double linf_error(const NodeField& a, const NodeField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

ModelParams make_params() {
  ModelParams p;
  p.kappa = kKappa;
  p.chi = 0.0;
  p.v0 = 1.0;
  p.species = {SpeciesParams{+1, 0.0, 0.0}, SpeciesParams{-1, 0.0, 0.0}};
  p.dielectric = Dielectric::uniform(kEps);
  p.mean_kind = MeanKind::entropic;
  return p;
}

std::vector<ConvergenceRow> convergence_study(const std::vector<double>& hs,
                                              DtRule rule, double T) {
  std::vector<ConvergenceRow> rows;
  for (double h : hs) {
    RunConfig cfg;
    cfg.preset = Preset::mms;
    cfg.nx = static_cast<int>(std::lround(2.0 / h));
    cfg.ny = cfg.nx;
    cfg.dt = (rule == DtRule::dt_h_over_10) ? h / 10.0 : h * h;
    cfg.t_final = T;
    cfg.eps_tol = (h <= 0.0125 + 1e-12) ? 1e-7 : 1e-6;
    cfg.solver_tol = 5e-14;
    cfg.finalize();

    Simulation sim(cfg);
    while (!sim.done()) sim.step();

    std::vector<NodeField> c_exact;
    EdgeField D_exact;
    exact_fields(sim.state().t, sim.grid(), c_exact, D_exact);

    ConvergenceRow row;
    row.h = h;
    row.err_c1 = linf_error(sim.state().c[0], c_exact[0]);
    row.err_c2 = linf_error(sim.state().c[1], c_exact[1]);
    if (!rows.empty()) {
      row.order_c1 = std::log2(rows.back().err_c1 / row.err_c1) /
                     std::log2(rows.back().h / h);
      row.order_c2 = std::log2(rows.back().err_c2 / row.err_c2) /
                     std::log2(rows.back().h / h);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "h,error_c1,order_c1,error_c2,order_c2\n";
  char buf[160];
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6e,%.4f,%.6e,%.4f\n", r.h, r.err_c1,
                  r.order_c1, r.err_c2, r.order_c2);
    out += buf;
  }
  return out;
}

}  // namespace mms
}  // namespace manp
