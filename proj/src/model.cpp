#include "manp/model.hpp"

#include <cmath>
#include <stdexcept>

#include "manp/errors.hpp"

namespace manp {

MeanKind mean_kind_from_string(const std::string& s) {
  if (s == "entropic") return MeanKind::entropic;
  if (s == "arithmetic") return MeanKind::arithmetic;
  if (s == "geometric") return MeanKind::geometric;
  if (s == "harmonic") return MeanKind::harmonic;
  throw ConfigError("unknown mean kind: " + s);
}

std::string to_string(MeanKind k) {
  switch (k) {
    case MeanKind::entropic: return "entropic";
    case MeanKind::arithmetic: return "arithmetic";
    case MeanKind::geometric: return "geometric";
    case MeanKind::harmonic: return "harmonic";
  }
  return "?";
}

Dielectric Dielectric::uniform(double eps) {
  Dielectric d;
  d.kind_ = Kind::uniform;
  d.eps_ = eps;
  return d;
}

Dielectric Dielectric::janus(double eps_m, double eps_w) {
  Dielectric d;
  d.kind_ = Kind::janus;
  d.eps_m_ = eps_m;
  d.eps_w_ = eps_w;
  return d;
}

Dielectric Dielectric::from_nodes(NodeField samples) {
  Dielectric d;
  d.kind_ = Kind::nodes;
  d.nodes_ = std::move(samples);
  return d;
}

double Dielectric::eval(double x, double y) const {
  switch (kind_) {
    case Kind::uniform:
      return eps_;
    case Kind::janus: {
      const double r = std::sqrt(x * x + y * y);
      return 0.5 * (eps_w_ - eps_m_) * (std::tanh(50.0 * r - 25.0) + 1.0) + eps_m_;
    }
    case Kind::nodes:
      throw std::logic_error("Dielectric::eval on node-sampled profile");
  }
  return eps_;
}

double Dielectric::at_node(const GridSpec& g, int i, int j) const {
  if (kind_ == Kind::nodes) return nodes_(i, j);
  return eval(g.node_x(i), g.node_y(j));
}

NodeField eval_dielectric_nodes(const ModelParams& params, const GridSpec& g) {
  NodeField eps(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) eps(i, j) = params.dielectric.at_node(g, i, j);
  return eps;
}

EdgeField eval_dielectric_edges(const ModelParams& params, const GridSpec& g) {
  EdgeField eps(g);
  const Dielectric& d = params.dielectric;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (d.closed_form()) {
        eps.x(i, j) = d.eval(eps.half_x(i), g.node_y(j));
        eps.y(i, j) = d.eval(g.node_x(i), eps.half_y(j));
      } else {
        eps.x(i, j) = 0.5 * (d.at_node(g, i, j) + d.at_node(g, i + 1, j));
        eps.y(i, j) = 0.5 * (d.at_node(g, i, j) + d.at_node(g, i, j + 1));
      }
      if (!(eps.x(i, j) > 0.0) || !(eps.y(i, j) > 0.0))
        throw std::invalid_argument("dielectric must be positive at every half point");
    }
  }
  return eps;
}

NodeField solvent_concentration(const std::vector<NodeField>& c,
                                const ModelParams& params) {
  const GridSpec& g = c.at(0).grid();
  NodeField c0(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double occupied = 0.0;
      for (int l = 0; l < params.num_species(); ++l)
        occupied += params.species[l].v * c[l](i, j);
      const double val = (1.0 - occupied) / params.v0;
      if (!(val > 0.0))
        throw NonPositiveSolvent("solvent concentration <= 0 at node (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
      c0(i, j) = val;
    }
  }
  return c0;
}

NodeField mu_cr(const std::vector<NodeField>& c, const ModelParams& params,
                const NodeField& eps_nodes, int ell) {
  const GridSpec& g = c.at(0).grid();
  const SpeciesParams& sp = params.species.at(ell);
  NodeField mu(g);

  const bool steric = sp.v != 0.0;
  const bool born = params.chi != 0.0;
  if (!steric && !born) return mu;

  if (born && !(sp.a > 0.0))
    throw std::invalid_argument("Born radius must be positive when chi != 0");

  NodeField c0;
  if (steric) c0 = solvent_concentration(c, params);

  const double born_coef = born ? params.chi * sp.q * sp.q / sp.a : 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double val = 0.0;
      if (steric) val -= sp.v / params.v0 * std::log(params.v0 * c0(i, j));
      if (born) val += born_coef * (1.0 / eps_nodes(i, j) - 1.0);
      mu(i, j) = val;
    }
  }
  return mu;
}

std::vector<NodeField> mu_cr_all(const std::vector<NodeField>& c,
                                 const ModelParams& params,
                                 const NodeField& eps_nodes) {
  std::vector<NodeField> out;
  out.reserve(params.species.size());
  for (int l = 0; l < params.num_species(); ++l)
    out.push_back(mu_cr(c, params, eps_nodes, l));
  return out;
}

NodeField charge_density(const std::vector<NodeField>& c,
                         const ModelParams& params, const GridSpec& g) {
  NodeField rho(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double val = 0.0;
      for (int l = 0; l < params.num_species(); ++l)
        val += params.species[l].q * c[l](i, j);
      if (!params.fixed_charge.empty()) val += params.fixed_charge(i, j);
      rho(i, j) = val;
    }
  }
  return rho;
}

NodeField janus_fixed_charge(const GridSpec& g) {
  NodeField rho(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double x = g.node_x(i);
      double y = g.node_y(j);
      if (std::abs(x) < 1e-12) x = 0.0;
      if (std::abs(y) < 1e-12) y = 0.0;
      const double r2 = x * x + y * y;
      if (r2 < 0.24 || r2 > 0.26) continue;
      // theta in (0, 2pi]; the positive x-axis belongs to the lower half.
      double theta = std::atan2(y, x);
      if (theta <= 0.0) theta += 2.0 * std::acos(-1.0);
      rho(i, j) = (theta <= std::acos(-1.0)) ? 1.0 : -1.0;
    }
  }
  return rho;
}

}  // namespace manp
