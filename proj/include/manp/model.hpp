#pragma once

#include <string>
#include <vector>

#include "manp/grid.hpp"

namespace manp {

/// Per-species data: valence q, ionic volume v (0 disables the steric term
/// for this species), Born radius a (must be > 0 whenever chi != 0).
struct SpeciesParams {
  int q = 0;
  double v = 0.0;
  double a = 0.0;
};

/// Half-point approximation of the Slotboom factor e^{-g}; selects the
/// B function used in the numerical fluxes.
enum class MeanKind { entropic, arithmetic, geometric, harmonic };

MeanKind mean_kind_from_string(const std::string& s);
std::string to_string(MeanKind k);

/// Relative dielectric coefficient: a closed-form profile (uniform or the
/// tanh Janus profile) or arbitrary node samples (edges then use the
/// arithmetic average of the two adjacent nodes).
class Dielectric {
 public:
  static Dielectric uniform(double eps);
  static Dielectric janus(double eps_m, double eps_w);
  static Dielectric from_nodes(NodeField samples);

  bool closed_form() const { return kind_ != Kind::nodes; }
  double eval(double x, double y) const;
  double at_node(const GridSpec& g, int i, int j) const;

 private:
  enum class Kind { uniform, janus, nodes };
  Kind kind_ = Kind::uniform;
  double eps_ = 1.0;
  double eps_m_ = 1.0, eps_w_ = 1.0;
  NodeField nodes_;
};

struct ModelParams {
  double kappa = 1.0;
  double chi = 0.0;
  double v0 = 1.0;
  std::vector<SpeciesParams> species;
  Dielectric dielectric = Dielectric::uniform(1.0);
  NodeField fixed_charge;  // empty means zero
  MeanKind mean_kind = MeanKind::entropic;
  double eps_tol = 1e-6;
  double solver_tol = 1e-10;
  int max_sweeps = 10000;

  int num_species() const { return static_cast<int>(species.size()); }
};

/// Dielectric sampled at nodes (Born term in mu_cr lives at nodes).
NodeField eval_dielectric_nodes(const ModelParams& params, const GridSpec& g);

/// Dielectric sampled at the half points (i+1/2, j) and (i, j+1/2);
/// closed-form profiles are evaluated there directly. Rejects values <= 0.
EdgeField eval_dielectric_edges(const ModelParams& params, const GridSpec& g);

/// c^0 = (1 - sum_l v^l c^l)/v^0. Throws NonPositiveSolvent if any entry <= 0.
NodeField solvent_concentration(const std::vector<NodeField>& c,
                                const ModelParams& params);

/// mu^{l,cr} = -(v^l/v^0) log(v^0 c^0) + chi (q^l)^2 / a^l * (1/eps - 1),
/// with eps at nodes.
NodeField mu_cr(const std::vector<NodeField>& c, const ModelParams& params,
                const NodeField& eps_nodes, int ell);

std::vector<NodeField> mu_cr_all(const std::vector<NodeField>& c,
                                 const ModelParams& params,
                                 const NodeField& eps_nodes);

/// rho = sum_l q^l c^l + rho^f.
NodeField charge_density(const std::vector<NodeField>& c,
                         const ModelParams& params, const GridSpec& g);

/// The Janus ring of fixed charge: +1 on the upper half of the annulus
/// 0.24 <= r^2 <= 0.26 (0 < theta <= pi), -1 on the lower half.
NodeField janus_fixed_charge(const GridSpec& g);

}  // namespace manp
