#include "doctest.h"

#include <cmath>
#include <numbers>

#include "necklab/harmonic.hpp"
#include "oracles.hpp"

using namespace necklab;
namespace {
constexpr double kPi = std::numbers::pi;

DiscreteMap winding_map(double t_total, int w, int n_t, int n_theta) {
  auto s2 = make_target("sphere", 2);
  DiscreteMap u = make_map(make_torus_grid(t_total, n_t, n_theta), s2);
  const double alpha = 2.0 * kPi * w / t_total;
  for (int i = 0; i < u.grid.n_t; ++i)
    for (int j = 0; j < u.grid.n_theta; ++j)
      u.values.col(u.grid.node(i, j)) =
          Eigen::Vector3d(std::cos(alpha * u.grid.t(i)), std::sin(alpha * u.grid.t(i)), 0.0);
  return u;
}

DiscreteMap theta_wrap_map(double length, int n_t, int n_theta) {
  auto s2 = make_target("sphere", 2);
  DiscreteMap u = make_map(make_cylinder_grid(0.0, length, n_t, n_theta), s2);
  for (int i = 0; i < u.grid.n_t; ++i)
    for (int j = 0; j < u.grid.n_theta; ++j) {
      const double th = u.grid.theta(j);
      u.values.col(u.grid.node(i, j)) = Eigen::Vector3d(std::cos(th), std::sin(th), 0.0);
    }
  return u;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("energy: constant, winding, wrap") {
  auto s2 = make_target("sphere", 2);
  const DiscreteMap c = constant_map(make_torus_grid(8.0 * kPi, 64, 16), s2, Eigen::Vector3d(0, 0, 1));
  CHECK(dirichlet_energy(c) == 0.0);

  // winding w=2 on the 8 pi torus: E = alpha^2 * area = 4 pi^2 up to O(h^2)
  const DiscreteMap u = winding_map(8.0 * kPi, 2, 64, 16);
  const double e64 = dirichlet_energy(u);
  CHECK(std::abs(e64 - 4.0 * kPi * kPi) < 0.2);
  const double err64 = std::abs(e64 - 4.0 * kPi * kPi);
  const double err128 = std::abs(dirichlet_energy(winding_map(8.0 * kPi, 2, 128, 16)) - 4.0 * kPi * kPi);
  CHECK(err64 / err128 == doctest::Approx(4.0).epsilon(0.2));

  // theta wrap on a cylinder of length L: E = 2 pi L up to O(h^2)
  const double L = 10.0;
  DiscreteMap wrap = theta_wrap_map(L, 16, 64);
  CHECK(std::abs(dirichlet_energy(wrap) - 2.0 * kPi * L) < 2.0 * kPi * L * 1e-3);
}

TEST_CASE("energy gauge invariance under theta rotation") {
  const DiscreteMap u = winding_map(8.0 * kPi, 1, 32, 12);
  DiscreteMap v = u;
  for (int i = 0; i < u.grid.n_t; ++i)
    for (int j = 0; j < u.grid.n_theta; ++j)
      v.values.col(v.grid.node(i, j)) = u.values.col(u.grid.node(i, (j + 5) % u.grid.n_theta));
  CHECK(dirichlet_energy(u) == dirichlet_energy(v));  // exact relabeling invariance
}

TEST_CASE("tension residual: structural zeros of geodesic-image maps") {
  auto s2 = make_target("sphere", 2);
  const DiscreteMap c = constant_map(make_torus_grid(6.0, 16, 16), s2, Eigen::Vector3d(1, 0, 0));
  CHECK(tension_residual(c).sup_norm() == 0.0);

  // affine geodesic images are exact discrete critical points: the 5-point
  // stencil error is parallel to u and the tangent part vanishes identically
  const DiscreteMap u = winding_map(8.0 * kPi, 2, 64, 16);
  CHECK(tension_residual(u).sup_norm() < 1e-12);
}

TEST_CASE("tension residual: second-order consistency with a known tension") {
  auto s2 = make_target("sphere", 2);
  const oracles::ModulatedWinding mod{8.0 * kPi, 2, 0.3, 3};
  auto residual_error = [&](int n_t) {
    DiscreteMap u = make_map(make_torus_grid(mod.t_total, n_t, 12), s2);
    for (int i = 0; i < u.grid.n_t; ++i)
      for (int j = 0; j < u.grid.n_theta; ++j) {
        const double f = mod.phase(u.grid.t(i));
        u.values.col(u.grid.node(i, j)) = Eigen::Vector3d(std::cos(f), std::sin(f), 0.0);
      }
    const TangentField r = tension_residual(u);
    double worst = 0.0;
    for (int i = 0; i < u.grid.n_t; ++i)
      for (int j = 0; j < u.grid.n_theta; ++j) {
        const double want = mod.tension_norm(u.grid.t(i));
        worst = std::max(worst, std::abs(r.values.col(u.grid.node(i, j)).norm() - want));
      }
    return worst;
  };
  const double e1 = residual_error(64);
  const double e2 = residual_error(128);
  const double e3 = residual_error(256);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("solve: constant map converges immediately") {
  auto s2 = make_target("sphere", 2);
  DiscreteMap c = constant_map(make_torus_grid(6.0, 16, 16), s2, Eigen::Vector3d(0, 1, 0));
  auto [u, rep] = solve_harmonic(c, {});
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.energy == 0.0);
}

TEST_CASE("solve: winding orbit recovered inside the equator circle") {
  // in S^1 the winding class is protected, so the map is a minimizer and
  // descent from noisy inits returns to the orbit with the same energy
  auto s1 = make_target("sphere", 1);
  const double t_total = 8.0 * kPi;
  const int w = 2;
  const double alpha = 2.0 * kPi * w / t_total;
  const CylinderGrid g = make_torus_grid(t_total, 48, 12);

  DiscreteMap exact = make_map(g, s1);
  for (int i = 0; i < g.n_t; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      exact.values.col(g.node(i, j)) =
          Eigen::Vector2d(std::cos(alpha * g.t(i)), std::sin(alpha * g.t(i)));
  const double e_exact = dirichlet_energy(exact);

  SolveOptions opts;
  opts.tol = 1e-9;
  opts.track_energy = true;
  std::vector<double> energies;
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    DiscreteMap init = exact;
    const TangentField noise = random_tangent_field(init, 1e-2, seed);
    for (int k = 0; k < g.num_nodes(); ++k)
      init.values.col(k) = s1->project(init.values.col(k) + noise.values.col(k));
    auto [u, rep] = solve_harmonic(init, opts);
    REQUIRE(rep.converged);
    CHECK(std::abs(rep.energy - e_exact) < 1e-3 * e_exact);
    // energy is non-increasing across accepted steps, exactly
    for (size_t k = 1; k < rep.energy_trace.size(); ++k)
      CHECK(rep.energy_trace[k] <= rep.energy_trace[k - 1]);
    CHECK(u.constraint_defect() < 1e-10);
    energies.push_back(rep.energy);
  }
  for (double e : energies) CHECK(std::abs(e - energies[0]) < 1e-6 * e_exact);
}

TEST_CASE("winding maps are S^2 saddles: descent walks away from noisy inits") {
  DiscreteMap init = winding_map(8.0 * kPi, 2, 32, 8);
  const double e_wind = dirichlet_energy(init);
  const TangentField noise = random_tangent_field(init, 5e-2, 99);
  for (int k = 0; k < init.grid.num_nodes(); ++k)
    init.values.col(k) = init.target->project(init.values.col(k) + noise.values.col(k));
  SolveOptions opts;
  opts.tol = 1e-10;
  opts.max_iter = 40000;
  auto [u, rep] = solve_harmonic(init, opts);
  CHECK(rep.energy < 0.9 * e_wind);  // escaped below the winding level
}

TEST_CASE("solve: Dirichlet neck converges to the connecting arc") {
  auto s2 = make_target("sphere", 2);
  const double d = 2.0, T = 4.0 * kPi;
  const Eigen::Vector3d p(1, 0, 0);
  const Eigen::Vector3d q(std::cos(d), std::sin(d), 0);
  const CylinderGrid g = make_cylinder_grid(0.0, T, 48, 12);

  DiscreteMap init = make_map(g, s2);
  for (int i = 0; i < g.n_t; ++i) {
    const Eigen::Vector3d arc = s2->geodesic_point(p, Eigen::Vector3d(0, 1, 0), d * g.t(i) / T);
    for (int j = 0; j < g.n_theta; ++j) init.values.col(g.node(i, j)) = arc;
  }
  Eigen::MatrixXd lo(3, g.n_theta), hi(3, g.n_theta);
  for (int j = 0; j < g.n_theta; ++j) {
    lo.col(j) = p;
    hi.col(j) = q;
  }
  impose_dirichlet_rows(init, lo, hi);
  // perturb the interior away from the arc
  const TangentField noise = random_tangent_field(init, 1e-2, 4);
  for (int k = 0; k < g.num_nodes(); ++k)
    if (!init.is_fixed(k)) init.values.col(k) = s2->project(init.values.col(k) + noise.values.col(k));

  SolveOptions opts;
  opts.tol = 1e-9;
  auto [u, rep] = solve_harmonic(init, opts);
  REQUIRE(rep.converged);
  CHECK(std::abs(rep.energy - 2.0 * kPi * d * d / T) < 1e-3);

  // theta-averaged image arc length approaches dist(p, q)
  double arc_len = 0.0;
  for (int i = 0; i + 1 < g.n_t; ++i) {
    Eigen::Vector3d a = Eigen::Vector3d::Zero(), b = Eigen::Vector3d::Zero();
    for (int j = 0; j < g.n_theta; ++j) {
      a += u.values.col(g.node(i, j));
      b += u.values.col(g.node(i + 1, j));
    }
    arc_len += s2->distance(a.normalized(), b.normalized());
  }
  CHECK(arc_len == doctest::Approx(d).epsilon(2e-3));
  // boundary rows never moved
  for (int j = 0; j < g.n_theta; ++j) {
    CHECK((u.values.col(g.node(0, j)) - p).norm() == 0.0);
    CHECK((u.values.col(g.node(g.n_t - 1, j)) - q).norm() == 0.0);
  }
}

TEST_CASE("continuation: one step reduces to a single solve") {
  auto s1 = make_target("sphere", 1);
  const CylinderGrid g = make_torus_grid(4.0 * kPi, 32, 8);
  auto make_init = [&](const CylinderGrid& grid) {
    DiscreteMap u = make_map(grid, s1);
    for (int i = 0; i < grid.n_t; ++i)
      for (int j = 0; j < grid.n_theta; ++j)
        u.values.col(grid.node(i, j)) =
            Eigen::Vector2d(std::cos(grid.t(i) * 0.5), std::sin(grid.t(i) * 0.5));
    return u;
  };
  const ContinuationResult one = continuation_sweep({g}, make_init, nullptr, {});
  CHECK(one.maps.size() == 1);
  CHECK(one.failed_step == -1);
  CHECK(one.reports[0].converged);
}

TEST_CASE("continuation: winding energies follow the closed form") {
  auto s1 = make_target("sphere", 1);
  const int w = 2;
  std::vector<CylinderGrid> grids;
  for (auto [T, n] : {std::pair{4.0 * kPi, 64}, {8.0 * kPi, 128}, {16.0 * kPi, 256}})
    grids.push_back(make_torus_grid(T, n, 8));
  auto make_init = [&](const CylinderGrid& grid) {
    DiscreteMap u = make_map(grid, s1);
    const double alpha = 2.0 * kPi * w / grid.extent();
    for (int i = 0; i < grid.n_t; ++i)
      for (int j = 0; j < grid.n_theta; ++j)
        u.values.col(grid.node(i, j)) =
            Eigen::Vector2d(std::cos(alpha * grid.t(i)), std::sin(alpha * grid.t(i)));
    return u;
  };
  const ContinuationResult sweep = continuation_sweep(grids, make_init, nullptr, {});
  REQUIRE(sweep.failed_step == -1);
  double prev = 1e300;
  for (size_t k = 0; k < grids.size(); ++k) {
    CHECK(sweep.reports[k].converged);
    const double expect = std::pow(2.0 * kPi * w, 2) * 2.0 * kPi / grids[k].extent();
    CHECK(std::abs(sweep.reports[k].energy - expect) < 1e-2 * expect);
    CHECK(sweep.reports[k].energy < prev);  // energy decreasing along the degeneration
    prev = sweep.reports[k].energy;
  }
}

TEST_CASE("resample keeps maps on the target and respects the s coordinate") {
  auto s2 = make_target("sphere", 2);
  const DiscreteMap u = winding_map(8.0 * kPi, 1, 64, 16);
  const DiscreteMap v = resample(u, make_torus_grid(16.0 * kPi, 96, 16));
  CHECK(v.constraint_defect() < 1e-12);
  // same winding profile in the s = t/T coordinate
  const double alpha_v = 2.0 * kPi * 1 / v.grid.extent();
  double worst = 0.0;
  for (int i = 0; i < v.grid.n_t; ++i) {
    const Eigen::Vector3d want(std::cos(alpha_v * v.grid.t(i)), std::sin(alpha_v * v.grid.t(i)), 0.0);
    worst = std::max(worst, (v.values.col(v.grid.node(i, 0)) - want).norm());
  }
  CHECK(worst < 5e-3);  // bilinear interpolation error at the coarse source grid
}

}  // TEST_SUITE
