#pragma once

// Flat degeneration geometry: collar parameters, cylinder/torus grids,
// annulus charts and junction regions.

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace necklab {

// Collar of a degenerating flat torus/cylinder.  l is the core length of the
// collapsing curve, rho the thick/thin cutoff; eta, delta, T are derived.
struct CollarParams {
  double l = 0;
  double rho = 0;
  double beta = 0.5;
  double eta = 0;    // exp(-pi/rho)
  double delta = 0;  // exp(-2 pi^2 / l)
  double T = 0;      // log(eta^2 / delta) > 0

  // Chart band of the collar: t in [pi/rho, 2 pi^2 / l - pi/rho],
  // radius r(t) = exp(-t) running from eta down to delta/eta.
  double t_lo() const;
  double t_hi() const;
};

// Upper bound for the admissible decay exponent, log2(3/2).
double beta_max();

CollarParams collar_params(double l, double rho, double beta = 0.5);

// Conformal chart (t, theta) -> exp(-t) (cos theta, sin theta).
Eigen::Vector2d annulus_chart(double t, double theta);
std::pair<double, double> annulus_chart_inverse(const Eigen::Vector2d& x);

// Affine change to the unit-length cylinder: s(eta) = 0, s(delta/eta) = 1.
double rescale_to_unit(double r, const CollarParams& p);
double radius_from_unit(double s, const CollarParams& p);

enum class JunctionSide { outer, inner };

// One of the two bands connecting the collar to the thick part.  Bounds are
// chart t-values; radius exp(-t) runs over [eps*eta, eta] (outer) or
// [delta/eta, delta/(eps*eta)] (inner).
struct JunctionRegion {
  JunctionSide side;
  double t_lo = 0;
  double t_hi = 0;
  double sigma = 0;
  double eps = 0;  // (delta/eta^2)^sigma = exp(-sigma T)
};

std::pair<JunctionRegion, JunctionRegion> junction_regions(const CollarParams& p, double sigma);

// Uniform grid on [t_min, t_max] x S^1.  theta is always 2 pi periodic with
// n_theta nodes; t holds n_t nodes, periodic (torus) or inclusive of both
// endpoints (cylinder).  Node cells tile the surface: trapezoid weights give
// half cells on the two t-boundary rows of a cylinder.
struct CylinderGrid {
  double t_min = 0;
  double t_max = 0;
  int n_t = 0;
  int n_theta = 0;
  bool t_periodic = false;
  double h_t = 0;
  double h_theta = 0;

  int num_nodes() const { return n_t * n_theta; }
  int node(int i, int j) const { return i * n_theta + j; }
  double t(int i) const { return t_min + i * h_t; }
  double theta(int j) const { return j * h_theta; }
  double extent() const { return t_max - t_min; }

  // neighbor row indices; -1 past a cylinder end
  int iplus(int i) const { return i + 1 < n_t ? i + 1 : (t_periodic ? 0 : -1); }
  int iminus(int i) const { return i > 0 ? i - 1 : (t_periodic ? n_t - 1 : -1); }
  int jplus(int j) const { return j + 1 < n_theta ? j + 1 : 0; }
  int jminus(int j) const { return j > 0 ? j - 1 : n_theta - 1; }

  bool boundary_row(int i) const { return !t_periodic && (i == 0 || i == n_t - 1); }
  double cell_t(int i) const { return boundary_row(i) ? 0.5 * h_t : h_t; }
  double cell_area(int i) const { return cell_t(i) * h_theta; }
  double total_area() const { return extent() * h_theta * n_theta; }
};

CylinderGrid make_torus_grid(double t_total, int n_t, int n_theta);
CylinderGrid make_cylinder_grid(double t_min, double t_max, int n_t, int n_theta);
CylinderGrid make_collar_grid(const CollarParams& p, int n_t, int n_theta);

}  // namespace necklab
