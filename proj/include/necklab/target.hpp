#pragma once

// Embedded target manifolds.  The concrete instance is the round unit sphere
// S^n in R^(n+1); the interface keeps the rest of the code target-generic.

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace necklab {

class TargetManifold {
 public:
  virtual ~TargetManifold() = default;

  virtual int ambient_dim() const = 0;
  virtual int intrinsic_dim() const = 0;
  virtual std::string name() const = 0;

  // Nearest-point retraction onto the manifold.
  virtual Eigen::VectorXd project(const Eigen::VectorXd& x) const = 0;

  // Orthogonal projection of R^m onto the tangent space at p (m x m,
  // symmetric, idempotent, rank = intrinsic_dim).
  virtual Eigen::MatrixXd tangent_projector(const Eigen::VectorXd& p) const = 0;

  // Second fundamental form A_p(X, Y), normal valued, symmetric bilinear.
  virtual Eigen::VectorXd second_form(const Eigen::VectorXd& p, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y) const = 0;

  // Symmetric matrix S with <A(G,G), A(X,Y)> = <S X, Y> summed over the
  // gradient components G; satisfies |S X| <= C |G|^2 |X|.
  virtual Eigen::MatrixXd shape_potential(const Eigen::VectorXd& p,
                                          const std::vector<Eigen::VectorXd>& grads) const = 0;

  // Unit-speed geodesic through p with initial direction v at arclength s.
  virtual Eigen::VectorXd geodesic_point(const Eigen::VectorXd& p, const Eigen::VectorXd& v,
                                         double s) const = 0;

  virtual double distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const = 0;

  // log_p(q): tangent vector at p of length distance(p, q) pointing at q.
  virtual Eigen::VectorXd log_map(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const = 0;
};

// Round unit sphere S^n embedded in R^(n+1).
class Sphere final : public TargetManifold {
 public:
  explicit Sphere(int n);

  int ambient_dim() const override { return n_ + 1; }
  int intrinsic_dim() const override { return n_; }
  std::string name() const override { return "sphere"; }

  Eigen::VectorXd project(const Eigen::VectorXd& x) const override;
  Eigen::MatrixXd tangent_projector(const Eigen::VectorXd& p) const override;
  Eigen::VectorXd second_form(const Eigen::VectorXd& p, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd shape_potential(const Eigen::VectorXd& p,
                                  const std::vector<Eigen::VectorXd>& grads) const override;
  Eigen::VectorXd geodesic_point(const Eigen::VectorXd& p, const Eigen::VectorXd& v,
                                 double s) const override;
  double distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const override;
  Eigen::VectorXd log_map(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const override;

 private:
  int n_;
};

std::shared_ptr<const TargetManifold> make_target(const std::string& name, int intrinsic_dim);

// Deterministic orthonormal tangent frame at p (m x n columns): Gram-Schmidt
// over the ambient axes in index order, keeping projections with residual
// norm >= 0.1.  Throws if the tangent space cannot be spanned.
Eigen::MatrixXd tangent_frame(const TargetManifold& target, const Eigen::VectorXd& p);

}  // namespace necklab
