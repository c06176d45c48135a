#include "necklab/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace necklab {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::uniform: return "uniform";
    case WeightKind::omega: return "omega";
    case WeightKind::frak: return "frak";
  }
  return "?";
}

double CollarLayout::radius(double grid_t) const { return p.eta * std::exp(-rel(grid_t)); }

CollarLayout collar_on_torus(const CollarParams& p) { return {p, kPi / p.rho}; }

CollarLayout collar_on_cylinder(const CollarParams& p, const CylinderGrid& grid) {
  if (grid.t_periodic) throw std::invalid_argument("collar_on_cylinder: grid is periodic");
  if (std::abs(grid.extent() - p.T) > 1e-9 * (1.0 + p.T))
    throw std::invalid_argument("collar_on_cylinder: grid extent does not match T");
  return {p, grid.t_min};
}

WeightField weight_uniform(const CylinderGrid& grid) {
  WeightField w;
  w.kind = WeightKind::uniform;
  w.values = Eigen::VectorXd::Ones(grid.num_nodes());
  return w;
}

WeightField weight_omega(const CylinderGrid& grid, const CollarLayout& layout) {
  const CollarParams& p = layout.p;
  const double invT2 = 1.0 / (p.T * p.T);
  const double thick = 1.0 + std::exp(-p.beta * p.T) + invT2;  // 1 + (delta/eta^2)^beta + 1/T^2
  WeightField w;
  w.kind = WeightKind::omega;
  w.values.resize(grid.num_nodes());
  for (int i = 0; i < grid.n_t; ++i) {
    const double t = grid.t(i);
    double v;
    if (layout.inside(t)) {
      const double x = std::clamp(layout.rel(t), 0.0, p.T);
      v = std::exp(-p.beta * x) + std::exp(-p.beta * (p.T - x)) + invT2;
    } else {
      v = thick;
    }
    for (int j = 0; j < grid.n_theta; ++j) w.values[grid.node(i, j)] = v;
  }
  return w;
}

WeightField weight_frak(const CylinderGrid& grid, const CollarLayout& layout, double sigma,
                        bool extend_off_collar) {
  if (!(sigma > 0.0 && sigma <= 0.45))
    throw std::invalid_argument("weight_frak: sigma outside (0, 0.45] (floor pole near 1/2)");
  const CollarParams& p = layout.p;
  const double b = p.beta, T = p.T;
  const double floor_j = 1.0 / (sigma * sigma * T * T);
  const double floor_m = 1.0 / ((1.0 - 2.0 * sigma) * (1.0 - 2.0 * sigma) * T * T);
  const double edge_value = 1.0 + std::exp(-b * sigma * T) + floor_j;  // outer edge of band 1

  WeightField w;
  w.kind = WeightKind::frak;
  w.values.resize(grid.num_nodes());
  for (int i = 0; i < grid.n_t; ++i) {
    const double t = grid.t(i);
    double v;
    if (!layout.inside(t)) {
      if (!extend_off_collar) throw std::domain_error("weight_frak: node outside the collar");
      v = edge_value;
    } else {
      const double x = std::clamp(layout.rel(t), 0.0, T);
      if (x <= sigma * T) {
        v = std::exp(-b * x) + std::exp(-b * (sigma * T - x)) + floor_j;
      } else if (x <= (1.0 - sigma) * T) {
        v = std::exp(-b * (x - sigma * T)) + std::exp(-b * ((1.0 - sigma) * T - x)) + floor_m;
      } else {
        v = std::exp(-b * (x - (1.0 - sigma) * T)) + std::exp(-b * (T - x)) + floor_j;
      }
    }
    for (int j = 0; j < grid.n_theta; ++j) w.values[grid.node(i, j)] = v;
  }
  return w;
}

}  // namespace necklab
