#pragma once

// Neck diagnostics: average image length, rescaled-derivative sup norms,
// Lorentz norms by rearrangement, junction quantization, pointwise bound
// ratios, and the convergence-to-geodesic fit.

#include <Eigen/Dense>

#include <vector>

#include "necklab/geodesic.hpp"
#include "necklab/map.hpp"
#include "necklab/weights.hpp"

namespace necklab {

// u on the unit cylinder: s = (t - t_min) / extent, so d_s = extent * d_t.
struct RescaledMap {
  Eigen::MatrixXd values;  // ambient_dim x (n_s * n_theta)
  int n_s = 0, n_theta = 0;
  double T = 0;      // t-extent of the source band
  double h_s = 0, h_theta = 0;
  std::shared_ptr<const TargetManifold> target;

  int node(int i, int j) const { return i * n_theta + j; }
  double s(int i) const { return i * h_s; }
};

RescaledMap rescale_map(const DiscreteMap& u);

// Rows of `u` with t in [t_lo, t_hi] as a non-periodic map (no bc).
DiscreteMap extract_band(const DiscreteMap& u, double t_lo, double t_hi);

// (1/2pi) int int |d_t u| dtheta dt over the whole grid of u.
double average_length_lambda(const DiscreteMap& u);

struct BandSup {
  double s_lo = 0, s_hi = 0;
  double sup_dtheta = 0;
  double sup_ds = 0;
};

std::vector<BandSup> sup_norm_bands(const RescaledMap& ru,
                                    const std::vector<std::pair<double, double>>& bands);

struct LorentzNorms {
  double L21 = 0;
  double L2inf = 0;
  double L2 = 0;
};

// Exact rearrangement norms of the step function taking value |values[i]| on
// a set of measure areas[i].
LorentzNorms lorentz_norms(const std::vector<double>& values, const std::vector<double>& areas);

struct JunctionL21 {
  double outer = 0;
  double inner = 0;
};

// L^{2,1} of |grad u^sharp| over the two junction regions, in annulus
// variables with the conformal area element.
JunctionL21 junction_quantization(const DiscreteMap& u, const CollarLayout& layout, double sigma);

struct PointwiseRatio {
  double max_ratio = 0;
  int argmax_node = -1;
};

// |x|^2 |grad u^sharp|^2 against ||grad u^sharp||_L2 [bracket] + Lambda^2/T^2
// with constant 1, over collar nodes.
PointwiseRatio pointwise_bound_check(const DiscreteMap& u, const CollarLayout& layout,
                                     double lambda_est);

// theta-only variant: |d_theta u^sharp|^2 against [bracket] ||grad||_L2^2,
// no 1/T^2 floor.
PointwiseRatio angular_bound_check(const DiscreteMap& u, const CollarLayout& layout);

struct GeodesicFit {
  GeodesicSegment segment;   // fitted constant-speed arc over the band
  double c1_residual = 0;    // theta-averaged profile, |u - fit| + |du - dfit|
  double c1_residual_raw = 0;  // same without theta-averaging
  double speed_s = 0;        // arclength per unit s of the fit
  bool degenerate = false;   // zero-length image: point segment
};

GeodesicFit fit_geodesic(const RescaledMap& ru, double s_lo, double s_hi);

}  // namespace necklab
