#include "necklab/map.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace necklab {

bool DiscreteMap::has_bc() const {
  return std::any_of(fixed.begin(), fixed.end(), [](uint8_t f) { return f != 0; });
}

double DiscreteMap::constraint_defect() const {
  double worst = 0.0;
  for (int k = 0; k < grid.num_nodes(); ++k) {
    const Eigen::VectorXd p = target->project(values.col(k));
    worst = std::max(worst, (values.col(k) - p).norm());
  }
  return worst;
}

DiscreteMap make_map(const CylinderGrid& grid, std::shared_ptr<const TargetManifold> target) {
  DiscreteMap u;
  u.grid = grid;
  u.target = std::move(target);
  u.values.resize(u.target->ambient_dim(), grid.num_nodes());
  return u;
}

DiscreteMap constant_map(const CylinderGrid& grid, std::shared_ptr<const TargetManifold> target,
                         const Eigen::VectorXd& p) {
  DiscreteMap u = make_map(grid, std::move(target));
  const Eigen::VectorXd q = u.target->project(p);
  for (int k = 0; k < grid.num_nodes(); ++k) u.values.col(k) = q;
  return u;
}

void impose_dirichlet_rows(DiscreteMap& u, const Eigen::MatrixXd& row_lo, const Eigen::MatrixXd& row_hi) {
  if (u.grid.t_periodic) throw std::invalid_argument("impose_dirichlet_rows: grid is t-periodic");
  if (row_lo.cols() != u.grid.n_theta || row_hi.cols() != u.grid.n_theta)
    throw std::invalid_argument("impose_dirichlet_rows: boundary data size mismatch");
  u.fixed.assign(u.grid.num_nodes(), 0);
  for (int j = 0; j < u.grid.n_theta; ++j) {
    u.values.col(u.grid.node(0, j)) = row_lo.col(j);
    u.values.col(u.grid.node(u.grid.n_t - 1, j)) = row_hi.col(j);
    u.fixed[u.grid.node(0, j)] = 1;
    u.fixed[u.grid.node(u.grid.n_t - 1, j)] = 1;
  }
}

double TangentField::sup_norm() const {
  double worst = 0.0;
  for (int k = 0; k < values.cols(); ++k) worst = std::max(worst, values.col(k).norm());
  return worst;
}

TangentField zero_field(const DiscreteMap& u) {
  TangentField w;
  w.values = Eigen::MatrixXd::Zero(u.target->ambient_dim(), u.grid.num_nodes());
  return w;
}

double tangency_defect(const DiscreteMap& u, const TangentField& w) {
  double worst = 0.0;
  for (int k = 0; k < u.grid.num_nodes(); ++k) {
    const Eigen::VectorXd v = w.values.col(k);
    const Eigen::VectorXd pv = u.target->tangent_projector(u.values.col(k)) * v;
    worst = std::max(worst, (v - pv).norm());
  }
  return worst;
}

TangentField random_tangent_field(const DiscreteMap& u, double amplitude, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TangentField w = zero_field(u);
  const int m = u.target->ambient_dim();
  for (int k = 0; k < u.grid.num_nodes(); ++k) {
    if (u.is_fixed(k)) continue;
    Eigen::VectorXd g(m);
    for (int c = 0; c < m; ++c) g(c) = gauss(rng);
    w.values.col(k) = amplitude * (u.target->tangent_projector(u.values.col(k)) * g);
  }
  return w;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> node_gradient(const DiscreteMap& u, int i, int j) {
  const CylinderGrid& g = u.grid;
  const int jp = g.jplus(j), jm = g.jminus(j);
  Eigen::VectorXd dth = (u.values.col(g.node(i, jp)) - u.values.col(g.node(i, jm))) / (2.0 * g.h_theta);

  const int ip = g.iplus(i), im = g.iminus(i);
  Eigen::VectorXd dt;
  if (ip >= 0 && im >= 0) {
    dt = (u.values.col(g.node(ip, j)) - u.values.col(g.node(im, j))) / (2.0 * g.h_t);
  } else if (ip >= 0) {
    dt = (u.values.col(g.node(ip, j)) - u.values.col(g.node(i, j))) / g.h_t;
  } else {
    dt = (u.values.col(g.node(i, j)) - u.values.col(g.node(im, j))) / g.h_t;
  }
  return {dt, dth};
}

DiscreteMap resample(const DiscreteMap& src, const CylinderGrid& dst_grid) {
  DiscreteMap out = make_map(dst_grid, src.target);
  const CylinderGrid& sg = src.grid;
  const double s_span = sg.t_periodic ? double(sg.n_t) : double(sg.n_t - 1);
  for (int i = 0; i < dst_grid.n_t; ++i) {
    const double s = dst_grid.t_periodic ? double(i) / dst_grid.n_t
                                         : double(i) / (dst_grid.n_t - 1);
    double fi = s * s_span;
    int i0 = int(std::floor(fi));
    double wt = fi - i0;
    int i1 = i0 + 1;
    if (sg.t_periodic) {
      i0 %= sg.n_t;
      i1 %= sg.n_t;
    } else {
      if (i1 > sg.n_t - 1) { i1 = sg.n_t - 1; i0 = i1 - 1; wt = 1.0; }
    }
    for (int j = 0; j < dst_grid.n_theta; ++j) {
      const double ft = dst_grid.theta(j) / sg.h_theta;
      int j0 = int(std::floor(ft)) % sg.n_theta;
      const double wj = ft - std::floor(ft);
      const int j1 = sg.jplus(j0);
      Eigen::VectorXd v = (1 - wt) * (1 - wj) * src.values.col(sg.node(i0, j0)) +
                          (1 - wt) * wj * src.values.col(sg.node(i0, j1)) +
                          wt * (1 - wj) * src.values.col(sg.node(i1, j0)) +
                          wt * wj * src.values.col(sg.node(i1, j1));
      out.values.col(dst_grid.node(i, j)) = src.target->project(v);
    }
  }
  return out;
}

DiscreteMap embed_equator(const DiscreteMap& u2) {
  if (u2.target->ambient_dim() != 2)
    throw std::invalid_argument("embed_equator: expects an S^1 map");
  DiscreteMap u3 = make_map(u2.grid, make_target("sphere", 2));
  u3.values.setZero();
  u3.values.topRows(2) = u2.values;
  u3.fixed = u2.fixed;
  return u3;
}

}  // namespace necklab
