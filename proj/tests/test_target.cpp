#include "doctest.h"

#include <random>

#include "necklab/target.hpp"

using namespace necklab;

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = gauss(rng);
  return v.normalized();
}

Eigen::VectorXd random_tangent(std::mt19937_64& rng, const TargetManifold& target,
                               const Eigen::VectorXd& p) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(p.size());
  for (int i = 0; i < p.size(); ++i) v[i] = gauss(rng);
  return target.tangent_projector(p) * v;
}

}  // namespace

TEST_SUITE("target") {

TEST_CASE("radial projection") {
  Sphere s2(2);
  CHECK((s2.project(Eigen::Vector3d(2, 0, 0)) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(s2.project(Eigen::Vector3d::Zero()), std::invalid_argument);
  const Eigen::Vector3d p = Eigen::Vector3d(0.3, -0.7, 0.64).normalized();
  CHECK((s2.project(p) - p).norm() < 1e-15);
}

TEST_CASE("tangent projector algebra") {
  Sphere s2(2);
  const Eigen::Vector3d north(0, 0, 1);
  Eigen::Matrix3d d = Eigen::Vector3d(1, 1, 0).asDiagonal();
  CHECK((s2.tangent_projector(north) - d).norm() < 1e-15);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd p = random_unit(rng, 3);
    const Eigen::MatrixXd P = s2.tangent_projector(p);
    CHECK((P * P - P).norm() < 1e-12);
    CHECK((P - P.transpose()).norm() < 1e-15);
    CHECK((P * p).norm() < 1e-12);
    CHECK(P.trace() == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("second fundamental form convention") {
  Sphere s2(2);
  const Eigen::Vector3d p(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  CHECK((s2.second_form(p, e2, e2) - p).norm() < 1e-15);
  CHECK(s2.second_form(p, e2, e3).norm() < 1e-15);

  // the identity that collapses the general form to |du|^2 |w|^2 on spheres
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd p1 = random_unit(rng, 3);
    const Eigen::VectorXd x = random_tangent(rng, s2, p1);
    const Eigen::VectorXd w = random_tangent(rng, s2, p1);
    const double lhs = s2.second_form(p1, x, x).dot(s2.second_form(p1, w, w));
    CHECK(lhs == doctest::Approx(x.squaredNorm() * w.squaredNorm()).epsilon(1e-12));
    // output is normal at p
    const Eigen::VectorXd a = s2.second_form(p1, x, w);
    CHECK((s2.tangent_projector(p1) * a).norm() < 1e-12);
  }
}

TEST_CASE("shape potential") {
  Sphere s2(2);
  const Eigen::Vector3d p(1, 0, 0);
  const double a = 0.7;
  const Eigen::MatrixXd s = s2.shape_potential(p, {Eigen::Vector3d(0, a, 0)});
  CHECK((s - a * a * s2.tangent_projector(p)).norm() < 1e-14);
  CHECK(s2.shape_potential(p, {}).norm() < 1e-15);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd q = random_unit(rng, 3);
    const Eigen::VectorXd g1 = random_tangent(rng, s2, q);
    const Eigen::VectorXd g2 = random_tangent(rng, s2, q);
    const Eigen::VectorXd x = random_tangent(rng, s2, q);
    const Eigen::VectorXd y = random_tangent(rng, s2, q);
    const Eigen::MatrixXd s12 = s2.shape_potential(q, {g1, g2});
    // defining identity summed over the gradient components
    const double rhs = s2.second_form(q, g1, g1).dot(s2.second_form(q, x, y)) +
                       s2.second_form(q, g2, g2).dot(s2.second_form(q, x, y));
    CHECK((s12 * x).dot(y) == doctest::Approx(rhs).epsilon(1e-12));
    // quadratic scaling
    const Eigen::MatrixXd s4 = s2.shape_potential(q, {2.0 * g1});
    CHECK((s4 - 4.0 * s2.shape_potential(q, {g1})).norm() < 1e-12);
    // pointwise bound |S X| <= |G|^2 |X|
    CHECK((s12 * x).norm() <= (g1.squaredNorm() + g2.squaredNorm()) * x.norm() + 1e-12);
  }
}

TEST_CASE("geodesics on the sphere") {
  Sphere s2(2);
  const Eigen::Vector3d p(1, 0, 0), v(0, 1, 0);
  CHECK((s2.geodesic_point(p, v, 0.0) - p).norm() < 1e-15);
  CHECK((s2.geodesic_point(p, v, 1.5707963267948966) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
  CHECK((s2.geodesic_point(p, v, 2.0 * 3.14159265358979323846) - p).norm() < 1e-12);
  CHECK(s2.distance(p, v) == doctest::Approx(1.5707963267948966).epsilon(1e-14));
  CHECK((s2.log_map(p, Eigen::Vector3d(0, 1, 0)) - 1.5707963267948966 * v).norm() < 1e-13);
}

TEST_CASE("deterministic tangent frames") {
  Sphere s2(2);
  std::mt19937_64 rng(19);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd p = random_unit(rng, 3);
    const Eigen::MatrixXd f1 = tangent_frame(s2, p);
    const Eigen::MatrixXd f2 = tangent_frame(s2, p);
    CHECK((f1 - f2).norm() == 0.0);  // same gauge every call
    CHECK((f1.transpose() * f1 - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK((f1.transpose() * p).norm() < 1e-12);
  }
  // degenerate alignment: p along an axis still yields a full frame
  const Eigen::MatrixXd f = tangent_frame(s2, Eigen::Vector3d(1, 0, 0));
  CHECK((f.transpose() * f - Eigen::Matrix2d::Identity()).norm() < 1e-12);
}

TEST_CASE("target factory") {
  CHECK(make_target("sphere", 2)->ambient_dim() == 3);
  CHECK(make_target("sphere", 1)->ambient_dim() == 2);
  CHECK_THROWS_AS(make_target("plane", 2), std::invalid_argument);
}

}  // TEST_SUITE
