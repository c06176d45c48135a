#include "necklab/neck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace necklab {

namespace {
constexpr double kPi = std::numbers::pi;
}

RescaledMap rescale_map(const DiscreteMap& u) {
  if (u.grid.t_periodic) throw std::invalid_argument("rescale_map: need a t-band, not a torus");
  RescaledMap ru;
  ru.values = u.values;
  ru.n_s = u.grid.n_t;
  ru.n_theta = u.grid.n_theta;
  ru.T = u.grid.extent();
  ru.h_s = 1.0 / (u.grid.n_t - 1);
  ru.h_theta = u.grid.h_theta;
  ru.target = u.target;
  return ru;
}

DiscreteMap extract_band(const DiscreteMap& u, double t_lo, double t_hi) {
  const CylinderGrid& g = u.grid;
  int i0 = -1, i1 = -1;
  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i);
    if (t >= t_lo - 1e-12 && t <= t_hi + 1e-12) {
      if (i0 < 0) i0 = i;
      i1 = i;
    }
  }
  if (i0 < 0 || i1 - i0 + 1 < 8) throw std::invalid_argument("extract_band: band holds too few rows");
  CylinderGrid band = make_cylinder_grid(g.t(i0), g.t(i1), i1 - i0 + 1, g.n_theta);
  DiscreteMap out = make_map(band, u.target);
  for (int i = i0; i <= i1; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      out.values.col(band.node(i - i0, j)) = u.values.col(g.node(i, j));
  return out;
}

double average_length_lambda(const DiscreteMap& u) {
  const CylinderGrid& g = u.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    const int ip = g.iplus(i);
    if (ip < 0) continue;
    for (int j = 0; j < g.n_theta; ++j)
      acc += (u.values.col(g.node(ip, j)) - u.values.col(g.node(i, j))).norm();
  }
  return acc * g.h_theta / (2.0 * kPi);
}

std::vector<BandSup> sup_norm_bands(const RescaledMap& ru,
                                    const std::vector<std::pair<double, double>>& bands) {
  std::vector<BandSup> out;
  for (auto [lo, hi] : bands) {
    BandSup b{lo, hi, 0.0, 0.0};
    int rows = 0;
    for (int i = 0; i < ru.n_s; ++i) {
      const double s = ru.s(i);
      if (s < lo - 1e-12 || s > hi + 1e-12) continue;
      ++rows;
      for (int j = 0; j < ru.n_theta; ++j) {
        const int jp = (j + 1) % ru.n_theta, jm = (j + ru.n_theta - 1) % ru.n_theta;
        const double dth =
            (ru.values.col(ru.node(i, jp)) - ru.values.col(ru.node(i, jm))).norm() / (2.0 * ru.h_theta);
        double ds;
        if (i > 0 && i + 1 < ru.n_s)
          ds = (ru.values.col(ru.node(i + 1, j)) - ru.values.col(ru.node(i - 1, j))).norm() /
               (2.0 * ru.h_s);
        else if (i + 1 < ru.n_s)
          ds = (ru.values.col(ru.node(i + 1, j)) - ru.values.col(ru.node(i, j))).norm() / ru.h_s;
        else
          ds = (ru.values.col(ru.node(i, j)) - ru.values.col(ru.node(i - 1, j))).norm() / ru.h_s;
        b.sup_dtheta = std::max(b.sup_dtheta, dth);
        b.sup_ds = std::max(b.sup_ds, ds);
      }
    }
    if (rows == 0) throw std::invalid_argument("sup_norm_bands: empty band");
    out.push_back(b);
  }
  return out;
}

LorentzNorms lorentz_norms(const std::vector<double>& values, const std::vector<double>& areas) {
  if (values.size() != areas.size()) throw std::invalid_argument("lorentz_norms: size mismatch");
  std::vector<std::pair<double, double>> lv;
  lv.reserve(values.size());
  double l2sq = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !(areas[i] > 0.0))
      throw std::invalid_argument("lorentz_norms: non-finite value or non-positive area");
    const double a = std::abs(values[i]);
    l2sq += a * a * areas[i];
    if (a > 0.0) lv.emplace_back(a, areas[i]);
  }
  std::sort(lv.begin(), lv.end(), [](auto& x, auto& y) { return x.first > y.first; });

  LorentzNorms out;
  out.L2 = std::sqrt(l2sq);
  double cum = 0.0;
  size_t i = 0;
  while (i < lv.size()) {
    const double level = lv[i].first;
    while (i < lv.size() && lv[i].first == level) cum += lv[i++].second;
    const double next = (i < lv.size()) ? lv[i].first : 0.0;
    const double root = std::sqrt(cum);
    out.L21 += 2.0 * (level - next) * root;
    out.L2inf = std::max(out.L2inf, level * root);
  }
  return out;
}

namespace {

// |grad u| at a node from centered differences
double node_grad_norm(const DiscreteMap& u, int i, int j) {
  auto [dt, dth] = node_gradient(u, i, j);
  return std::sqrt(dt.squaredNorm() + dth.squaredNorm());
}

// Dirichlet energy of the collar band (conformally invariant quantity)
double collar_energy(const DiscreteMap& u, const CollarLayout& layout) {
  double e = 0.0;
  const CylinderGrid& g = u.grid;
  for (int i = 0; i < g.n_t; ++i) {
    if (!layout.inside(g.t(i))) continue;
    for (int j = 0; j < g.n_theta; ++j) {
      const double gn = node_grad_norm(u, i, j);
      e += g.cell_area(i) * gn * gn;
    }
  }
  return e;
}

}  // namespace

JunctionL21 junction_quantization(const DiscreteMap& u, const CollarLayout& layout, double sigma) {
  const auto [outer, inner] = junction_regions(layout.p, sigma);
  const CylinderGrid& g = u.grid;
  const double chart0 = layout.p.t_lo();
  const double eta = layout.p.eta;

  auto region_l21 = [&](const JunctionRegion& region) {
    const double lo = layout.t_start + (region.t_lo - chart0);
    const double hi = layout.t_start + (region.t_hi - chart0);
    std::vector<double> vals, areas;
    for (int i = 0; i < g.n_t; ++i) {
      const double t = g.t(i);
      if (t < lo - 1e-12 || t > hi + 1e-12) continue;
      const double rel = layout.rel(t);
      const double r = eta * std::exp(-rel);  // annulus radius
      for (int j = 0; j < g.n_theta; ++j) {
        vals.push_back(node_grad_norm(u, i, j) / r);  // |grad u^sharp| = e^t |grad u|
        areas.push_back(r * r * g.cell_area(i));      // conformal area element
      }
    }
    if (vals.empty()) return 0.0;
    return lorentz_norms(vals, areas).L21;
  };

  return {region_l21(outer), region_l21(inner)};
}

PointwiseRatio pointwise_bound_check(const DiscreteMap& u, const CollarLayout& layout,
                                     double lambda_est) {
  const CollarParams& p = layout.p;
  const double grad_l2 = std::sqrt(collar_energy(u, layout));
  const double floor = lambda_est * lambda_est / (p.T * p.T);
  const CylinderGrid& g = u.grid;
  PointwiseRatio out;
  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i);
    if (!layout.inside(t)) continue;
    const double x = std::clamp(layout.rel(t), 0.0, p.T);
    const double bracket = std::exp(-p.beta * x) + std::exp(-p.beta * (p.T - x));
    const double rhs = grad_l2 * bracket + floor;
    for (int j = 0; j < g.n_theta; ++j) {
      const double gn = node_grad_norm(u, i, j);
      const double ratio = gn * gn / rhs;
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.argmax_node = g.node(i, j);
      }
    }
  }
  return out;
}

PointwiseRatio angular_bound_check(const DiscreteMap& u, const CollarLayout& layout) {
  const CollarParams& p = layout.p;
  const double e_collar = collar_energy(u, layout);
  const CylinderGrid& g = u.grid;
  PointwiseRatio out;
  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i);
    if (!layout.inside(t)) continue;
    const double x = std::clamp(layout.rel(t), 0.0, p.T);
    const double bracket = std::exp(-p.beta * x) + std::exp(-p.beta * (p.T - x));
    const double rhs = bracket * e_collar;
    for (int j = 0; j < g.n_theta; ++j) {
      auto [dt, dth] = node_gradient(u, i, j);
      const double ratio = dth.squaredNorm() / rhs;
      if (ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.argmax_node = g.node(i, j);
      }
    }
  }
  return out;
}

GeodesicFit fit_geodesic(const RescaledMap& ru, double s_lo, double s_hi) {
  std::vector<int> rows;
  for (int i = 0; i < ru.n_s; ++i)
    if (ru.s(i) >= s_lo - 1e-12 && ru.s(i) <= s_hi + 1e-12) rows.push_back(i);
  if (rows.size() < 3) throw std::invalid_argument("fit_geodesic: band holds too few rows");

  const auto& target = *ru.target;
  const int m = int(ru.values.rows());

  // theta-averaged profile, projected back to the target where possible
  std::vector<Eigen::VectorXd> prof(rows.size());
  bool projectable = true;
  for (size_t k = 0; k < rows.size(); ++k) {
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < ru.n_theta; ++j) avg += ru.values.col(ru.node(rows[k], j));
    avg /= ru.n_theta;
    if (avg.norm() < 1e-8) {
      projectable = false;
      prof[k] = avg;
    } else {
      prof[k] = target.project(avg);
    }
  }

  GeodesicFit fit;
  double hops = 0.0;
  if (projectable)
    for (size_t k = 0; k + 1 < prof.size(); ++k) hops += target.distance(prof[k], prof[k + 1]);

  const double span = ru.s(rows.back()) - ru.s(rows.front());

  // centered d_s using the full map (band rows are interior to (0,1))
  auto ds_at = [&](int i, int j) -> Eigen::VectorXd {
    if (i > 0 && i + 1 < ru.n_s)
      return (ru.values.col(ru.node(i + 1, j)) - ru.values.col(ru.node(i - 1, j))) / (2.0 * ru.h_s);
    if (i + 1 < ru.n_s)
      return (ru.values.col(ru.node(i + 1, j)) - ru.values.col(ru.node(i, j))) / ru.h_s;
    return (ru.values.col(ru.node(i, j)) - ru.values.col(ru.node(i - 1, j))) / ru.h_s;
  };

  if (!projectable || hops < 1e-8) {
    // point segment: the image of the band has no length
    fit.degenerate = true;
    Eigen::VectorXd anchor = Eigen::VectorXd::Zero(m);
    if (projectable) {
      for (const auto& c : prof) anchor += c;
    } else {
      for (int i : rows)
        for (int j = 0; j < ru.n_theta; ++j) anchor += ru.values.col(ru.node(i, j));
    }
    if (anchor.norm() < 1e-12) anchor = ru.values.col(ru.node(rows[0], 0));
    anchor = target.project(anchor);
    fit.segment.start = anchor;
    fit.segment.tangent = tangent_frame(target, anchor).col(0);
    fit.segment.length = 0.0;
    fit.segment.target = ru.target;
    fit.segment.n_samples = int(rows.size());
    fit.speed_s = 0.0;
    double res = 0.0, res_raw = 0.0;
    for (size_t k = 0; k < rows.size(); ++k) {
      res = std::max(res, (prof[k] - anchor).norm());
      for (int j = 0; j < ru.n_theta; ++j)
        res_raw = std::max(res_raw, (ru.values.col(ru.node(rows[k], j)) - anchor).norm() +
                                        ds_at(rows[k], j).norm());
    }
    fit.c1_residual = res;
    fit.c1_residual_raw = res_raw;
    return fit;
  }

  // direction from the first hop of substantial length
  Eigen::VectorXd v0;
  {
    size_t k = 1;
    while (k + 1 < prof.size() && target.distance(prof[0], prof[k]) < std::min(0.5, hops / 4.0)) ++k;
    v0 = target.log_map(prof[0], prof[k]);
    if (v0.norm() < 1e-12) v0 = target.log_map(prof[0], prof[1]);
    v0.normalize();
  }

  fit.segment = make_segment(prof[0], v0, hops, ru.target, int(rows.size()));
  fit.speed_s = hops / span;

  const double dl = 1e-6;
  double res = 0.0, res_raw = 0.0;
  for (size_t k = 0; k < rows.size(); ++k) {
    const double ell = hops * (ru.s(rows[k]) - ru.s(rows.front())) / span;
    const Eigen::VectorXd gp = segment_point(fit.segment, ell);
    const Eigen::VectorXd gv = fit.speed_s *
        (segment_point(fit.segment, ell + dl) - segment_point(fit.segment, ell - dl)) / (2.0 * dl);
    // theta-averaged C1 distance
    Eigen::VectorXd pv;
    {
      const size_t kk = k;
      const int i = rows[kk];
      Eigen::VectorXd up = Eigen::VectorXd::Zero(m), dn = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < ru.n_theta; ++j) {
        up += ru.values.col(ru.node(std::min(i + 1, ru.n_s - 1), j));
        dn += ru.values.col(ru.node(std::max(i - 1, 0), j));
      }
      const double denom = (i > 0 && i + 1 < ru.n_s) ? 2.0 * ru.h_s : ru.h_s;
      pv = (up - dn) / (ru.n_theta * denom);
    }
    res = std::max(res, (prof[k] - gp).norm() + (pv - gv).norm());
    for (int j = 0; j < ru.n_theta; ++j)
      res_raw = std::max(res_raw, (ru.values.col(ru.node(rows[k], j)) - gp).norm() +
                                      (ds_at(rows[k], j) - gv).norm());
  }
  fit.c1_residual = res;
  fit.c1_residual_raw = res_raw;
  return fit;
}

}  // namespace necklab
