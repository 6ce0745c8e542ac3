#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "manp/diagnostics.hpp"
#include "manp/errors.hpp"
#include "manp/np_scheme.hpp"
#include "manp/simulation.hpp"
#include "support/oracles.hpp"

using namespace manp;

namespace {
GridSpec unit_grid(int nx, int ny) { return GridSpec(nx, ny, 2.0, 2.0, -1.0, -1.0); }
}

TEST_CASE("total mass") {
  SUBCASE("constant 0.1 on [-1,1]^2 integrates to 0.4 on any grid") {
    for (auto [nx, ny] : {std::pair{10, 10}, {7, 5}, {50, 20}}) {
      GridSpec g = unit_grid(nx, ny);
      CHECK(total_mass(NodeField(g, 0.1), g) == doctest::Approx(0.4).epsilon(1e-14));
    }
  }
  SUBCASE("linearity") {
    std::mt19937 rng(2);
    GridSpec g = unit_grid(9, 9);
    NodeField a = test::random_node_field(g, rng, -1.0, 1.0);
    NodeField b = test::random_node_field(g, rng, -1.0, 1.0);
    NodeField ab(g);
    for (std::size_t k = 0; k < ab.size(); ++k) ab[k] = a[k] + b[k];
    CHECK(total_mass(ab, g) ==
          doctest::Approx(total_mass(a, g) + total_mass(b, g)).epsilon(1e-14));
  }
}

TEST_CASE("discrete energy") {
  ModelParams p = test::simple_params(1.0, {1});

  SUBCASE("unit concentration, zero field") {
    GridSpec g = unit_grid(6, 6);
    std::vector<NodeField> c = {NodeField(g, 1.0)};
    std::vector<NodeField> mu = {NodeField(g)};
    CHECK(discrete_energy(c, EdgeField(g), EdgeField(g, 1.0), mu, p, g) == 0.0);
  }

  SUBCASE("c = e gives area times e") {
    GridSpec g = unit_grid(8, 8);
    std::vector<NodeField> c = {NodeField(g, std::exp(1.0))};
    std::vector<NodeField> mu = {NodeField(g)};
    CHECK(discrete_energy(c, EdgeField(g), EdgeField(g, 1.0), mu, p, g) ==
          doctest::Approx(4.0 * std::exp(1.0)).epsilon(1e-13));
  }

  SUBCASE("splits into field and entropy parts") {
    std::mt19937 rng(3);
    GridSpec g = unit_grid(6, 4);
    EdgeField D = test::random_edge_field(g, rng, -1.0, 1.0);
    EdgeField eps = test::random_edge_field(g, rng, 0.5, 2.0);
    std::vector<NodeField> c = {test::random_node_field(g, rng, 0.2, 2.0)};
    std::vector<NodeField> mu = {test::random_node_field(g, rng, -1.0, 1.0)};
    double entropy = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        entropy += c[0](i, j) * (std::log(c[0](i, j)) + mu[0](i, j));
    entropy *= g.cell_area;
    const double total = discrete_energy(c, D, eps, mu, p, g);
    CHECK(total == doctest::Approx(potential_energy(D, eps, p, g) + entropy)
                       .epsilon(1e-13));
  }

  SUBCASE("nonpositive concentration is rejected") {
    GridSpec g = unit_grid(4, 4);
    std::vector<NodeField> c = {NodeField(g, 1.0)};
    c[0](1, 1) = 0.0;
    std::vector<NodeField> mu = {NodeField(g)};
    CHECK_THROWS_AS(
        discrete_energy(c, EdgeField(g), EdgeField(g, 1.0), mu, p, g),
        NonPositiveConcentration);
  }
}

TEST_CASE("min concentration") {
  GridSpec g = unit_grid(5, 5);
  std::vector<NodeField> c = {NodeField(g, 0.1), NodeField(g, 0.1)};
  CHECK(min_concentration(c) == 0.1);
  c[1](3, 2) = 1e-9;
  CHECK(min_concentration(c) == 1e-9);
}

TEST_CASE("gauss residual") {
  GridSpec g = unit_grid(6, 6);
  ModelParams p = test::simple_params(1.3, {1, -1});

  SUBCASE("constant D with zero charge") {
    std::vector<NodeField> c = {NodeField(g, 0.0), NodeField(g, 0.0)};
    NodeField res = gauss_residual(EdgeField(g, 2.5), c, NodeField(g), p, g);
    CHECK(res.max_abs() == 0.0);
  }

  SUBCASE("single-edge perturbation moves exactly two nodes") {
    std::mt19937 rng(4);
    EdgeField D = test::random_edge_field(g, rng, -1.0, 1.0);
    std::vector<NodeField> c = {test::random_node_field(g, rng, 0.1, 1.0),
                                test::random_node_field(g, rng, 0.1, 1.0)};
    NodeField rho_f(g);
    NodeField before = gauss_residual(D, c, rho_f, p, g);
    const double delta = 0.37;
    D.x(2, 3) += delta;
    NodeField after = gauss_residual(D, c, rho_f, p, g);
    const double jump = 2.0 * p.kappa * p.kappa * delta / g.dx;
    int changed = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double d = after(i, j) - before(i, j);
        if (std::abs(d) > 1e-13) {
          ++changed;
          if (i == 2 && j == 3)
            CHECK(d == doctest::Approx(jump));
          else {
            CHECK(i == 3);
            CHECK(j == 3);
            CHECK(d == doctest::Approx(-jump));
          }
        }
      }
    CHECK(changed == 2);
  }
}

TEST_CASE("peclet field") {
  GridSpec g = unit_grid(5, 5);
  SUBCASE("zero increments") {
    std::vector<EdgeField> dg = {EdgeField(g)};
    CHECK(peclet_field(dg).max_abs() == 0.0);
  }
  SUBCASE("single-edge attribution to the left node") {
    std::vector<EdgeField> dg = {EdgeField(g), EdgeField(g)};
    dg[0].x(2, 1) = 3.0;
    NodeField pe = peclet_field(dg);
    CHECK(pe(2, 1) == 3.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < pe.size(); ++k) sum += pe[k];
    CHECK(sum == 3.0);
  }
  SUBCASE("max over species") {
    std::vector<EdgeField> dg = {EdgeField(g), EdgeField(g)};
    dg[0].y(1, 1) = -2.0;
    dg[1].y(1, 1) = 1.5;
    CHECK(peclet_field(dg)(1, 1) == 2.0);
  }
}

TEST_CASE("dt_star") {
  GridSpec g = unit_grid(4, 4);
  ModelParams p = test::simple_params(1.0, {1, -1});

  SUBCASE("reference value") {
    std::vector<EdgeField> dg = {EdgeField(g), EdgeField(g)};
    std::vector<NodeField> c = {NodeField(g, 1.0), NodeField(g, 0.5)};
    CHECK(dt_star(dg, c, EdgeField(g, 1.0), p) == doctest::Approx(1.0));
  }

  SUBCASE("exponential sensitivity to the max increment") {
    std::vector<EdgeField> dg = {EdgeField(g), EdgeField(g)};
    std::vector<NodeField> c = {NodeField(g, 1.0), NodeField(g, 1.0)};
    EdgeField eps(g, 1.0);
    const double base = dt_star(dg, c, eps, p);
    dg[0].x(1, 1) = 2.0;
    CHECK(dt_star(dg, c, eps, p) == doctest::Approx(base * std::exp(-2.0)));
    dg[0].x(1, 1) = 4.5;
    CHECK(dt_star(dg, c, eps, p) == doctest::Approx(base * std::exp(-4.5)));
  }

  SUBCASE("dielectric contrast factor eps_min^3/eps_max^2") {
    std::vector<EdgeField> dg = {EdgeField(g), EdgeField(g)};
    std::vector<NodeField> c = {NodeField(g, 1.0), NodeField(g, 1.0)};
    const double uniform = dt_star(dg, c, EdgeField(g, 1.0), p);
    EdgeField eps(g, 78.0);
    eps.x(0, 0) = 1.0;
    CHECK(dt_star(dg, c, eps, p) ==
          doctest::Approx(uniform / (78.0 * 78.0)).epsilon(1e-12));
  }
}

TEST_CASE("dissipation rate I1") {
  GridSpec g = unit_grid(8, 8);
  ModelParams p = test::simple_params(1.0, {1, -1});
  EdgeField eps(g, 1.0);

  SUBCASE("zero fluxes give zero") {
    std::vector<EdgeField> J = {EdgeField(g), EdgeField(g)};
    std::vector<NodeField> c = {NodeField(g, 0.5), NodeField(g, 0.5)};
    std::vector<NodeField> mu = {NodeField(g), NodeField(g)};
    CHECK(dissipation_rate_I1(J, c, mu, EdgeField(g), eps, p, g) == 0.0);
  }

  SUBCASE("nonnegative on scheme-generated states") {
    std::mt19937 rng(6);
    const double dt = 0.05;
    for (MeanKind kind : {MeanKind::entropic, MeanKind::harmonic}) {
      for (int trial = 0; trial < 5; ++trial) {
        EdgeField D = test::random_edge_field(g, rng, -3.0, 3.0);
        std::vector<NodeField> mu = {
            test::random_node_field(g, rng, -1.0, 1.0),
            test::random_node_field(g, rng, -1.0, 1.0)};
        std::vector<EdgeField> dg = compute_dg(D, eps, mu, p);
        std::vector<NodeField> c_new(2);
        std::vector<EdgeField> J(2);
        for (int l = 0; l < 2; ++l) {
          NpSystem sys = assemble_np_system(
              dg[l], dt, kind, p, g, test::random_node_field(g, rng, 0.2, 1.0));
          c_new[l] = solve_np(sys, 1e-13);
          J[l] = compute_fluxes(c_new[l], dg[l], kind, p, g);
        }
        CHECK(dissipation_rate_I1(J, c_new, mu, D, eps, p, g) >= -1e-12);
      }
    }
  }
}

TEST_CASE("diagnostics csv round trip shape") {
  StepDiagnostics d;
  d.step = 3;
  d.time = 0.3;
  d.mass_per_species = {0.4, 0.4};
  d.energy_Fh = -1.5;
  d.min_concentration = 0.1;
  d.max_gauss_residual = 1e-12;
  d.max_curl_residual = 1e-7;
  d.max_peclet = 2.0;
  d.dt_star = 0.5;
  d.dissipation_I1 = 0.01;
  d.relax_sweeps = 4;
  CHECK(d.all_finite());
  const std::string header = diagnostics_csv_header(2);
  const std::string row = diagnostics_csv_row(d);
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(row.begin(), row.end(), ','));
  CHECK(row.substr(0, 2) == "3,");
}
