#pragma once

// Grid-sampled maps into an embedded target and tangent fields along them.

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "necklab/geometry.hpp"
#include "necklab/target.hpp"

namespace necklab {

// One target point per grid node (column node(i,j) of `values`).  Nodes with
// fixed[node] != 0 carry Dirichlet data and never move under the solver.
struct DiscreteMap {
  CylinderGrid grid;
  std::shared_ptr<const TargetManifold> target;
  Eigen::MatrixXd values;       // ambient_dim x num_nodes
  std::vector<uint8_t> fixed;   // empty means "no constraints"

  bool is_fixed(int node) const { return !fixed.empty() && fixed[node] != 0; }
  bool has_bc() const;

  // max over nodes of the distance to the target (projection defect)
  double constraint_defect() const;
};

DiscreteMap make_map(const CylinderGrid& grid, std::shared_ptr<const TargetManifold> target);

// Constant map at p.
DiscreteMap constant_map(const CylinderGrid& grid, std::shared_ptr<const TargetManifold> target,
                         const Eigen::VectorXd& p);

// Pins both t-boundary rows of a cylinder grid to the given circles
// (ambient_dim x n_theta each) and stamps the values.
void impose_dirichlet_rows(DiscreteMap& u, const Eigen::MatrixXd& row_lo, const Eigen::MatrixXd& row_hi);

// Per-node ambient vectors constrained to the pullback tangent bundle of a
// base map; Dirichlet nodes carry zero.
struct TangentField {
  Eigen::MatrixXd values;  // ambient_dim x num_nodes

  double sup_norm() const;
};

TangentField zero_field(const DiscreteMap& u);

// max over nodes of |(I - P_u) w| (tangency defect)
double tangency_defect(const DiscreteMap& u, const TangentField& w);

// Gaussian tangent field with the given amplitude, zero on fixed nodes.
TangentField random_tangent_field(const DiscreteMap& u, double amplitude, uint64_t seed);

// Centered-difference gradient components at a node (one-sided at cylinder
// ends).  Returns {d_t u, d_theta u}.
std::pair<Eigen::VectorXd, Eigen::VectorXd> node_gradient(const DiscreteMap& u, int i, int j);

// Bilinear resample of `src` onto `dst_grid` in the (s, theta) coordinates
// (s = normalized t), projected back to the target.
DiscreteMap resample(const DiscreteMap& src, const CylinderGrid& dst_grid);

// Maps into the equator S^1 x {0} of S^2: lift a 2-component sphere map to a
// 3-component one (appends a zero coordinate).
DiscreteMap embed_equator(const DiscreteMap& u2);

}  // namespace necklab
