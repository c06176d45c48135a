#include "doctest.h"

#include <cmath>
#include <numbers>

#include "necklab/weights.hpp"

using namespace necklab;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("weights") {

TEST_CASE("omega is continuous at the collar boundary and matches closed forms") {
  // T = 1 case: thick value 1 + e^{-1/2} + 1
  const CollarParams p1 = collar_params(2.0 * kPi * kPi / 3.0, kPi, 0.5);
  REQUIRE(p1.T == doctest::Approx(1.0));
  {
    const double t_total = 2.0 * kPi * kPi / p1.l;
    const CylinderGrid g = make_torus_grid(t_total, 64, 8);
    const WeightField w = weight_omega(g, collar_on_torus(p1));
    const double thick = 1.0 + std::exp(-0.5) + 1.0;
    CHECK(thick == doctest::Approx(2.60653065971).epsilon(1e-9));
    CHECK(w.max() <= thick * (1 + 1e-12));
    CHECK(w.min() > 0.0);
  }

  const CollarParams p = collar_params(0.5, kPi, 0.5);
  const double t_total = 2.0 * kPi * kPi / p.l;
  const CylinderGrid g = make_torus_grid(t_total, 256, 8);
  const CollarLayout layout = collar_on_torus(p);
  const WeightField w = weight_omega(g, layout);

  // off-collar value equals the collar branch at both junction radii
  const double thick = 1.0 + std::exp(-p.beta * p.T) + 1.0 / (p.T * p.T);
  const double at_eta = std::exp(0.0) + std::exp(-p.beta * p.T) + 1.0 / (p.T * p.T);
  CHECK(at_eta == doctest::Approx(thick).epsilon(1e-15));

  // midpoint value 2 (sqrt(delta)/eta)^beta + 1/T^2
  int mid_row = 0;
  double best = 1e300;
  for (int i = 0; i < g.n_t; ++i) {
    const double d = std::abs(layout.rel(g.t(i)) - 0.5 * p.T);
    if (layout.inside(g.t(i)) && d < best) {
      best = d;
      mid_row = i;
    }
  }
  const double rel = layout.rel(g.t(mid_row));
  const double expect = std::exp(-p.beta * rel) + std::exp(-p.beta * (p.T - rel)) + 1.0 / (p.T * p.T);
  CHECK(w.values[g.node(mid_row, 0)] == doctest::Approx(expect).epsilon(1e-14));
  const double closed = 2.0 * std::pow(std::sqrt(p.delta) / p.eta, p.beta) + 1.0 / (p.T * p.T);
  CHECK(w.values[g.node(mid_row, 0)] == doctest::Approx(closed).epsilon(1e-6));

  // continuity: nodes just inside and outside the junction differ by O(h)
  for (int i = 0; i + 1 < g.n_t; ++i) {
    const double jump = std::abs(w.values[g.node(i + 1, 0)] - w.values[g.node(i, 0)]);
    CHECK(jump < 3.0 * p.beta * g.h_t);
  }
}

TEST_CASE("frak branch values and the floors") {
  const CollarParams p = collar_params(0.5, kPi, 0.5);
  const CylinderGrid g = make_collar_grid(p, 128, 8);
  const CollarLayout layout = collar_on_cylinder(p, g);
  const double sigma = 0.25;
  const WeightField w = weight_frak(g, layout, sigma);

  // outer edge: 1 + eps^beta + 1/(sigma T)^2
  const double eps = std::exp(-sigma * p.T);
  const double edge = 1.0 + std::pow(eps, p.beta) + 1.0 / (sigma * sigma * p.T * p.T);
  CHECK(w.values[g.node(0, 0)] == doctest::Approx(edge).epsilon(1e-12));

  CHECK_THROWS_AS(weight_frak(g, layout, 0.46), std::invalid_argument);
  CHECK_THROWS_AS(weight_frak(g, layout, -0.1), std::invalid_argument);

  // strict domain: a torus grid has off-collar nodes
  const CylinderGrid torus = make_torus_grid(2.0 * kPi * kPi / p.l, 64, 8);
  CHECK_THROWS_AS(weight_frak(torus, collar_on_torus(p), sigma), std::domain_error);
  const WeightField ext = weight_frak(torus, collar_on_torus(p), sigma, true);
  CHECK(ext.min() > 0.0);
}

TEST_CASE("sandwich: frak dominates omega on the collar, exactly") {
  for (double l : {0.3, 0.5, 1.0}) {
    for (double sigma : {0.1, 0.25, 0.4}) {
      const CollarParams p = collar_params(l, kPi, 0.5);
      const CylinderGrid g = make_collar_grid(p, 256, 8);
      const CollarLayout layout = collar_on_cylinder(p, g);
      const WeightField fr = weight_frak(g, layout, sigma);
      const WeightField om = weight_omega(g, layout);
      double worst = 1e300;
      for (int k = 0; k < g.num_nodes(); ++k) worst = std::min(worst, fr.values[k] - om.values[k]);
      CHECK(worst >= 0.0);
    }
  }
}

TEST_CASE("positivity") {
  const CollarParams p = collar_params(0.5, kPi, 0.5);
  const CylinderGrid g = make_collar_grid(p, 64, 8);
  const CollarLayout layout = collar_on_cylinder(p, g);
  CHECK(weight_uniform(g).min() == 1.0);
  CHECK(weight_omega(g, layout).min() > 0.0);
  CHECK(weight_frak(g, layout, 0.25).min() > 0.0);
}

}  // TEST_SUITE
