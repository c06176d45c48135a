#include "necklab/geometry.hpp"

#include <cmath>
#include <numbers>

namespace necklab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double beta_max() { return std::log2(1.5); }

double CollarParams::t_lo() const { return kPi / rho; }
double CollarParams::t_hi() const { return 2.0 * kPi * kPi / l - kPi / rho; }

CollarParams collar_params(double l, double rho, double beta) {
  if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("collar_params: l must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("collar_params: rho must be positive");
  if (!(beta > 0.0 && beta < beta_max()))
    throw std::invalid_argument("collar_params: beta outside (0, log2(3/2))");

  CollarParams p;
  p.l = l;
  p.rho = rho;
  p.beta = beta;
  p.eta = std::exp(-kPi / rho);
  p.delta = std::exp(-2.0 * kPi * kPi / l);
  if (p.delta <= 0.0) throw std::invalid_argument("collar_params: delta underflows, l too small");
  p.T = 2.0 * std::log(p.eta) - std::log(p.delta);
  if (!(p.delta < p.eta * p.eta) || !(p.T > 0.0))
    throw std::invalid_argument("collar_params: delta >= eta^2 (collar shorter than its junctions)");
  return p;
}

Eigen::Vector2d annulus_chart(double t, double theta) {
  const double r = std::exp(-t);
  return {r * std::cos(theta), r * std::sin(theta)};
}

std::pair<double, double> annulus_chart_inverse(const Eigen::Vector2d& x) {
  const double r = x.norm();
  if (!(r > 0.0)) throw std::invalid_argument("annulus_chart_inverse: zero point");
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.0) theta += 2.0 * kPi;
  return {-std::log(r), theta};
}

double rescale_to_unit(double r, const CollarParams& p) {
  const double slack = 1e-12 * (1.0 + r);
  if (!(r >= p.delta / p.eta - slack && r <= p.eta + slack))
    throw std::invalid_argument("rescale_to_unit: radius outside [delta/eta, eta]");
  return (-std::log(r) + std::log(p.eta)) / p.T;
}

double radius_from_unit(double s, const CollarParams& p) {
  return std::exp(-(s * p.T - std::log(p.eta)));
}

std::pair<JunctionRegion, JunctionRegion> junction_regions(const CollarParams& p, double sigma) {
  if (!(sigma > 0.0 && sigma <= 0.5))
    throw std::invalid_argument("junction_regions: sigma outside (0, 1/2]");
  const double eps = std::exp(-sigma * p.T);  // (delta/eta^2)^sigma
  JunctionRegion outer{JunctionSide::outer, p.t_lo(), p.t_lo() + sigma * p.T, sigma, eps};
  JunctionRegion inner{JunctionSide::inner, p.t_hi() - sigma * p.T, p.t_hi(), sigma, eps};
  return {outer, inner};
}

namespace {

CylinderGrid check_grid(CylinderGrid g) {
  if (g.n_t < 8 || g.n_theta < 8) throw std::invalid_argument("grid: need n_t >= 8 and n_theta >= 8");
  if (!(g.t_max > g.t_min)) throw std::invalid_argument("grid: degenerate t range");
  g.h_theta = 2.0 * kPi / g.n_theta;
  g.h_t = g.t_periodic ? (g.t_max - g.t_min) / g.n_t : (g.t_max - g.t_min) / (g.n_t - 1);
  return g;
}

}  // namespace

CylinderGrid make_torus_grid(double t_total, int n_t, int n_theta) {
  CylinderGrid g;
  g.t_min = 0.0;
  g.t_max = t_total;
  g.n_t = n_t;
  g.n_theta = n_theta;
  g.t_periodic = true;
  return check_grid(g);
}

CylinderGrid make_cylinder_grid(double t_min, double t_max, int n_t, int n_theta) {
  CylinderGrid g;
  g.t_min = t_min;
  g.t_max = t_max;
  g.n_t = n_t;
  g.n_theta = n_theta;
  g.t_periodic = false;
  return check_grid(g);
}

CylinderGrid make_collar_grid(const CollarParams& p, int n_t, int n_theta) {
  return make_cylinder_grid(p.t_lo(), p.t_hi(), n_t, n_theta);
}

}  // namespace necklab
