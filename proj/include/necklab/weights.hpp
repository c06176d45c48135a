#pragma once

// The positive weight fields attached to a degenerating collar: the
// normalization weight omega (defined on the whole surface) and the junction
// weight frak_w (defined on the collar, with per-band floors).

#include <Eigen/Dense>

#include "necklab/geometry.hpp"

namespace necklab {

enum class WeightKind { uniform, omega, frak };

struct WeightField {
  WeightKind kind = WeightKind::uniform;
  Eigen::VectorXd values;  // one positive entry per grid node

  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
};

const char* weight_kind_name(WeightKind k);

// Describes where the collar band of `p` sits inside a grid: grid-t
// `t_start` corresponds to chart-t pi/rho (radius eta).  For a torus of
// length 2 pi^2 / l the band starts at pi/rho; for a cylinder modelling the
// bare collar it starts at t_min.
struct CollarLayout {
  CollarParams p;
  double t_start = 0;

  double t_end() const { return t_start + p.T; }
  // position inside the collar, in [0, T] for collar nodes
  double rel(double grid_t) const { return grid_t - t_start; }
  bool inside(double grid_t, double slack = 1e-9) const {
    return grid_t >= t_start - slack && grid_t <= t_end() + slack;
  }
  double radius(double grid_t) const;  // eta * exp(-rel)
};

CollarLayout collar_on_torus(const CollarParams& p);
CollarLayout collar_on_cylinder(const CollarParams& p, const CylinderGrid& grid);

WeightField weight_uniform(const CylinderGrid& grid);

// omega: exp(-beta rel) + exp(-beta (T - rel)) + 1/T^2 on the collar,
// 1 + (delta/eta^2)^beta + 1/T^2 off it; continuous across the junction.
WeightField weight_omega(const CylinderGrid& grid, const CollarLayout& layout);

// frak_w: the three-band field with floors 1/(sigma T)^2 on the junction
// bands and 1/((1-2 sigma) T)^2 in the middle.  Undefined off the collar:
// with extend_off_collar the outer-edge value is used there, otherwise
// off-collar nodes throw.  sigma > 0.45 is rejected (floor pole).
WeightField weight_frak(const CylinderGrid& grid, const CollarLayout& layout, double sigma,
                        bool extend_off_collar = false);

}  // namespace necklab
