#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "manp/ampere.hpp"
#include "manp/diagnostics.hpp"
#include "manp/np_scheme.hpp"
#include "support/oracles.hpp"

using namespace manp;

namespace {

/// Divergence-free edge field from a cell-centered stream function:
/// x(i,j) = (psi(i,j) - psi(i,j-1))/dy, y(i,j) = -(psi(i,j) - psi(i-1,j))/dx
/// where psi(i,j) sits at cell center (i+1/2, j+1/2). The discrete
/// divergence telescopes to zero identically.
EdgeField stream_field(const NodeField& psi) {
  const GridSpec& g = psi.grid();
  EdgeField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      f.x(i, j) = (psi(i, j) - psi(i, j - 1)) / g.dy;
      f.y(i, j) = -(psi(i, j) - psi(i - 1, j)) / g.dx;
    }
  return f;
}

}  // namespace

TEST_CASE("theta extrapolation") {
  GridSpec g(4, 4, 2.0, 2.0);
  ModelParams p = test::simple_params(1.0, {1});

  SUBCASE("invalid history gives the zero field") {
    ThetaHistory hist;
    EdgeField theta = theta_extrapolate(EdgeField(g, 1.0), hist, 0.1, p);
    CHECK(theta.max_abs() == 0.0);
  }

  SUBCASE("steady state with zero currents gives zero") {
    EdgeField D(g, 0.4);
    ThetaHistory hist{D, {EdgeField(g)}, std::nullopt, true};
    EdgeField theta = theta_extrapolate(D, hist, 0.1, p);
    CHECK(theta.max_abs() == 0.0);
  }

  SUBCASE("single edge hand value") {
    EdgeField D_prev(g), D(g), J(g);
    D.x(1, 2) = 0.01;
    J.x(1, 2) = 0.2;
    ThetaHistory hist{D_prev, {J}, std::nullopt, true};
    EdgeField theta = theta_extrapolate(D, hist, 0.1, p);
    CHECK(theta.x(1, 2) == doctest::Approx(0.01 / 0.1 + 0.2 / 2.0));
    CHECK(theta.x(1, 2) == doctest::Approx(0.2));
  }

  SUBCASE("manufactured source enters with a minus sign") {
    EdgeField D(g), J(g), S(g);
    J.x(0, 0) = 1.0;
    S.x(0, 0) = 0.6;
    ThetaHistory hist{EdgeField(g), {J}, S, true};
    EdgeField theta = theta_extrapolate(D, hist, 1.0, p);
    CHECK(theta.x(0, 0) == doctest::Approx((1.0 - 0.6) / 2.0));
  }
}

TEST_CASE("ampere step") {
  GridSpec g(4, 4, 2.0, 2.0);

  SUBCASE("no current, no theta") {
    ModelParams p = test::simple_params(1.0, {1});
    std::mt19937 rng(5);
    EdgeField D = test::random_edge_field(g, rng, -1.0, 1.0);
    EdgeField D_star = ampere_step(D, {EdgeField(g)}, EdgeField(g), 0.2, p);
    for (std::size_t k = 0; k < D.size(); ++k) {
      CHECK(D_star.x_values()[k] == D.x_values()[k]);
      CHECK(D_star.y_values()[k] == D.y_values()[k]);
    }
  }

  SUBCASE("opposite valences with equal fluxes cancel") {
    ModelParams p = test::simple_params(1.0, {1, -1});
    std::mt19937 rng(6);
    EdgeField D = test::random_edge_field(g, rng, -1.0, 1.0);
    EdgeField J = test::random_edge_field(g, rng, -2.0, 2.0);
    EdgeField theta = test::random_edge_field(g, rng, -1.0, 1.0);
    EdgeField D_star = ampere_step(D, {J, J}, theta, 0.25, p);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        CHECK(D_star.x(i, j) ==
              doctest::Approx(D.x(i, j) + 0.25 * theta.x(i, j)).epsilon(1e-15));
        CHECK(D_star.y(i, j) ==
              doctest::Approx(D.y(i, j) + 0.25 * theta.y(i, j)).epsilon(1e-15));
      }
  }
}

TEST_CASE("Gauss law propagates through solve + ampere step") {
  std::mt19937 rng(7);
  GridSpec g(6, 6, 2.0, 2.0, -1.0, -1.0);
  ModelParams p = test::simple_params(0.9, {1, -1});
  const double dt = 0.05;
  EdgeField eps(g, 1.0);

  // consistent data: any D and positive c, with rho_f defined by the grid
  // Gauss law itself
  EdgeField D = test::random_edge_field(g, rng, -1.0, 1.0);
  std::vector<NodeField> c = {test::random_node_field(g, rng, 0.2, 1.0),
                              test::random_node_field(g, rng, 0.2, 1.0)};
  NodeField rho_f = gauss_residual(D, c, NodeField(g), p, g);
  CHECK(gauss_residual(D, c, rho_f, p, g).max_abs() <= 1e-13);

  // one scheme step with a divergence-free theta
  std::vector<NodeField> mu = {NodeField(g), NodeField(g)};
  std::vector<EdgeField> dg = compute_dg(D, eps, mu, p);
  std::vector<NodeField> c_new(2);
  std::vector<EdgeField> J(2);
  for (int l = 0; l < 2; ++l) {
    NpSystem sys = assemble_np_system(dg[l], dt, MeanKind::entropic, p, g, c[l]);
    c_new[l] = solve_np(sys, 1e-13);
    J[l] = compute_fluxes(c_new[l], dg[l], MeanKind::entropic, p, g);
  }
  NodeField psi = test::random_node_field(g, rng, -1.0, 1.0);
  EdgeField theta = stream_field(psi);
  CHECK(node_divergence(theta).max_abs() <= 1e-12 / g.dx / g.dy);

  EdgeField D_star = ampere_step(D, J, theta, dt, p);
  CHECK(gauss_residual(D_star, c_new, rho_f, p, g).max_abs() <= 1e-11);
}

TEST_CASE("extrapolated theta is divergence free for scheme-generated data") {
  std::mt19937 rng(8);
  GridSpec g(8, 8, 2.0, 2.0, -1.0, -1.0);
  ModelParams p = test::simple_params(1.0, {1, -1});
  const double dt = 0.02;
  EdgeField eps(g, 1.0);

  EdgeField D0 = test::random_edge_field(g, rng, -0.5, 0.5);
  std::vector<NodeField> c0 = {test::random_node_field(g, rng, 0.3, 1.0),
                               test::random_node_field(g, rng, 0.3, 1.0)};

  // step 0 -> 1 with theta = 0
  std::vector<NodeField> mu = {NodeField(g), NodeField(g)};
  std::vector<EdgeField> dg = compute_dg(D0, eps, mu, p);
  std::vector<NodeField> c1(2);
  std::vector<EdgeField> J0(2);
  for (int l = 0; l < 2; ++l) {
    NpSystem sys = assemble_np_system(dg[l], dt, MeanKind::entropic, p, g, c0[l]);
    c1[l] = solve_np(sys, 1e-13);
    J0[l] = compute_fluxes(c1[l], dg[l], MeanKind::entropic, p, g);
  }
  EdgeField D1 = ampere_step(D0, J0, EdgeField(g), dt, p);

  ThetaHistory hist{D0, J0, std::nullopt, true};
  EdgeField theta1 = theta_extrapolate(D1, hist, dt, p);
  CHECK(node_divergence(theta1).max_abs() <= 1e-11);
}
