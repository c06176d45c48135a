#include "necklab/target.hpp"

#include <cmath>
#include <stdexcept>

namespace necklab {

Sphere::Sphere(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Sphere: intrinsic dimension must be >= 1");
}

Eigen::VectorXd Sphere::project(const Eigen::VectorXd& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) throw std::invalid_argument("Sphere::project: zero vector has no direction");
  return x / r;
}

Eigen::MatrixXd Sphere::tangent_projector(const Eigen::VectorXd& p) const {
  const int m = ambient_dim();
  return Eigen::MatrixXd::Identity(m, m) - p * p.transpose();
}

Eigen::VectorXd Sphere::second_form(const Eigen::VectorXd& p, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y) const {
  // Convention A_p(X,Y) = <X,Y> p, so -Delta u = |grad u|^2 u and
  // <A(X,X), A(W,W)> = |X|^2 |W|^2.
  return x.dot(y) * p;
}

Eigen::MatrixXd Sphere::shape_potential(const Eigen::VectorXd& p,
                                        const std::vector<Eigen::VectorXd>& grads) const {
  double g2 = 0.0;
  for (const auto& g : grads) g2 += g.squaredNorm();
  return g2 * tangent_projector(p);
}

Eigen::VectorXd Sphere::geodesic_point(const Eigen::VectorXd& p, const Eigen::VectorXd& v,
                                       double s) const {
  return std::cos(s) * p + std::sin(s) * v;
}

double Sphere::distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const {
  const double c = std::clamp(p.dot(q), -1.0, 1.0);
  return std::acos(c);
}

Eigen::VectorXd Sphere::log_map(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const {
  const double d = distance(p, q);
  Eigen::VectorXd w = q - p.dot(q) * p;
  const double wn = w.norm();
  if (wn < 1e-14) {
    if (d < 1e-7) return Eigen::VectorXd::Zero(p.size());
    throw std::invalid_argument("Sphere::log_map: antipodal points");
  }
  return (d / wn) * w;
}

std::shared_ptr<const TargetManifold> make_target(const std::string& name, int intrinsic_dim) {
  if (name == "sphere") return std::make_shared<Sphere>(intrinsic_dim);
  throw std::invalid_argument("make_target: unknown target '" + name + "'");
}

Eigen::MatrixXd tangent_frame(const TargetManifold& target, const Eigen::VectorXd& p) {
  const int m = target.ambient_dim();
  const int n = target.intrinsic_dim();
  const Eigen::MatrixXd P = target.tangent_projector(p);
  Eigen::MatrixXd frame(m, n);
  int got = 0;
  for (int axis = 0; axis < m && got < n; ++axis) {
    Eigen::VectorXd v = P.col(axis);
    for (int k = 0; k < got; ++k) v -= frame.col(k).dot(v) * frame.col(k);
    const double vn = v.norm();
    if (vn >= 0.1) frame.col(got++) = v / vn;
  }
  if (got < n) {
    // fallback pass with a smaller acceptance threshold
    for (int axis = 0; axis < m && got < n; ++axis) {
      Eigen::VectorXd v = P.col(axis);
      for (int k = 0; k < got; ++k) v -= frame.col(k).dot(v) * frame.col(k);
      const double vn = v.norm();
      if (vn >= 1e-8) frame.col(got++) = v / vn;
    }
  }
  if (got < n) throw std::runtime_error("tangent_frame: rank-deficient tangent basis");
  return frame;
}

}  // namespace necklab
