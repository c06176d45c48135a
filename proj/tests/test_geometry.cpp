#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "necklab/geometry.hpp"

using namespace necklab;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("geometry") {

TEST_CASE("collar parameters from closed forms") {
  const CollarParams p = collar_params(1.0, kPi, 0.5);
  CHECK(p.eta == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(p.delta == doctest::Approx(std::exp(-2.0 * kPi * kPi)).epsilon(1e-15));
  CHECK(p.T == doctest::Approx(2.0 * kPi * kPi - 2.0).epsilon(1e-14));

  const CollarParams p2 = collar_params(2.0 * kPi * kPi / 3.0, kPi, 0.5);
  CHECK(p2.delta == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
  CHECK(p2.T == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collar rejects delta >= eta^2") {
  CHECK_THROWS_AS(collar_params(10.0, kPi, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(collar_params(-1.0, kPi, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(collar_params(1.0, kPi, 0.7), std::invalid_argument);  // beta cap log2(3/2)
  CHECK_THROWS_AS(collar_params(1.0, kPi, 0.0), std::invalid_argument);
}

TEST_CASE("annulus chart and inverse") {
  CHECK((annulus_chart(0.0, 0.0) - Eigen::Vector2d(1, 0)).norm() < 1e-15);
  CHECK((annulus_chart(std::log(2.0), kPi / 2) - Eigen::Vector2d(0, 0.5)).norm() < 1e-15);

  const auto [t, th] = annulus_chart_inverse(annulus_chart(3.7, 1.1));
  CHECK(t == doctest::Approx(3.7).epsilon(1e-14));
  CHECK(th == doctest::Approx(1.1).epsilon(1e-14));
  CHECK_THROWS_AS(annulus_chart_inverse(Eigen::Vector2d(0, 0)), std::invalid_argument);
}

TEST_CASE("unit rescaling endpoints and midpoint") {
  const CollarParams p = collar_params(1.0, kPi, 0.5);
  CHECK(rescale_to_unit(p.eta, p) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(rescale_to_unit(p.delta / p.eta, p) - 1.0) < 1e-13);
  CHECK(std::abs(rescale_to_unit(std::sqrt(p.delta), p) - 0.5) < 1e-13);
  CHECK_THROWS_AS(rescale_to_unit(2.0 * p.eta, p), std::invalid_argument);

  // strictly increasing in -log r, and the inverse round-trips
  double prev = -1.0;
  for (int k = 0; k <= 20; ++k) {
    const double s = k / 20.0;
    const double r = radius_from_unit(s, p);
    const double s2 = rescale_to_unit(r, p);
    CHECK(std::abs(s2 - s) < 1e-12);
    CHECK(s2 > prev);
    prev = s2;
  }
}

TEST_CASE("grids: torus, collar, cylinder") {
  const CylinderGrid torus = make_torus_grid(8.0 * kPi, 64, 16);
  CHECK(torus.h_t == doctest::Approx(8.0 * kPi / 64).epsilon(1e-15));
  CHECK(torus.t_periodic);
  CHECK(torus.h_theta == doctest::Approx(2.0 * kPi / 16).epsilon(1e-15));

  const CollarParams p = collar_params(1.0, kPi, 0.5);
  const CylinderGrid collar = make_collar_grid(p, 64, 16);
  CHECK(collar.t_min == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(collar.t_max == doctest::Approx(2.0 * kPi * kPi - 1.0).epsilon(1e-14));
  CHECK(!collar.t_periodic);

  const CylinderGrid cyl = make_cylinder_grid(0.0, 10.0, 8, 8);
  CHECK(cyl.num_nodes() == 64);
  CHECK(!cyl.t_periodic);

  CHECK_THROWS_AS(make_torus_grid(1.0, 4, 16), std::invalid_argument);
  CHECK_THROWS_AS(make_cylinder_grid(1.0, 1.0, 8, 8), std::invalid_argument);
}

TEST_CASE("cell areas tile the surface") {
  for (bool periodic : {true, false}) {
    const CylinderGrid g =
        periodic ? make_torus_grid(5.0, 16, 12) : make_cylinder_grid(0, 5, 16, 12);
    double sum = 0.0;
    for (int i = 0; i < g.n_t; ++i)
      for (int j = 0; j < g.n_theta; ++j) sum += g.cell_area(i);
    CHECK(sum == doctest::Approx(5.0 * 2.0 * kPi).epsilon(1e-12));
  }
}

TEST_CASE("junction regions have t-length sigma T") {
  const CollarParams p = collar_params(1.0, kPi, 0.5);
  const auto [outer, inner] = junction_regions(p, 0.25);
  CHECK(outer.t_hi - outer.t_lo == doctest::Approx(0.25 * p.T).epsilon(1e-12));
  CHECK(inner.t_hi - inner.t_lo == doctest::Approx(0.25 * p.T).epsilon(1e-12));
  CHECK(outer.t_hi - outer.t_lo == doctest::Approx(4.434796).epsilon(1e-5));
  CHECK(outer.t_lo == doctest::Approx(p.t_lo()).epsilon(1e-13));
  CHECK(inner.t_hi == doctest::Approx(p.t_hi()).epsilon(1e-13));
  CHECK(outer.eps > 0.0);
  CHECK(outer.eps < 1.0);

  // sigma = 1/2 tiles the collar with empty middle
  const auto [o2, i2] = junction_regions(p, 0.5);
  CHECK(o2.t_hi == doctest::Approx(i2.t_lo).epsilon(1e-12));

  // sigma -> 0 shrinks both regions to the collar ends
  const auto [o3, i3] = junction_regions(p, 1e-9);
  CHECK(o3.t_hi - o3.t_lo < 1e-7);
  CHECK(std::abs(o3.eps - 1.0) < 1e-7);
  CHECK(i3.t_hi - i3.t_lo < 1e-7);
}

TEST_CASE("chart consistency across a collar grid") {
  const CollarParams p = collar_params(1.0, kPi, 0.5);
  const CylinderGrid g = make_collar_grid(p, 32, 8);
  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i);
    const double r = annulus_chart(t, 0.3).norm();
    const double s = rescale_to_unit(r, p);
    CHECK(std::abs(s - (t - kPi / p.rho) / p.T) < 1e-12);
  }
}

TEST_CASE("monotonicity of T and delta in l") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.3, 2.0);
  for (int k = 0; k < 50; ++k) {
    const double l1 = uni(rng);
    const double l2 = l1 + 0.2;
    const CollarParams a = collar_params(l1, kPi, 0.5);
    const CollarParams b = collar_params(l2, kPi, 0.5);
    CHECK(a.T > b.T);
    CHECK(a.delta < b.delta);
  }
}

}  // TEST_SUITE
