#pragma once

// Morse index and nullity of constant-speed geodesic segments: the 1D
// Dirichlet Jacobi eigenproblem and an independent conjugate-point shooting
// oracle.

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "necklab/target.hpp"

namespace necklab {

struct GeodesicSegment {
  Eigen::VectorXd start;
  Eigen::VectorXd tangent;  // unit initial direction
  double length = 0;        // arclength, unit-speed parametrization
  std::shared_ptr<const TargetManifold> target;
  int n_samples = 0;        // discretization nodes (endpoints included)
};

// n_samples = 0 picks max(64, ceil(16 L)) intervals.
GeodesicSegment make_segment(const Eigen::VectorXd& start, const Eigen::VectorXd& tangent,
                             double length, std::shared_ptr<const TargetManifold> target,
                             int n_samples = 0);

Eigen::VectorXd segment_point(const GeodesicSegment& seg, double s);
double segment_speed_defect(const GeodesicSegment& seg);  // max deviation from unit speed

// Trapezoidal quadrature of int |v'|^2 - <A(g',g'), A(v,v)>; v given at the
// segment samples, tangent along the curve, zero at both endpoints.
double geodesic_second_variation(const GeodesicSegment& seg,
                                 const std::vector<Eigen::VectorXd>& v);

struct SegmentSpectrum {
  std::vector<double> normal_eigenvalues;      // one normal direction
  std::vector<double> tangential_eigenvalues;
  int normal_index = 0, normal_nullity = 0;    // per normal direction
  int index = 0, nullity = 0;                  // all (n-1) normal copies + tangential
  double zero_tol = 0;
  int extended() const { return index + nullity; }
};

// Dirichlet eigenvalues of the discretized Jacobi operator on (0, L), split
// into the tangential branch (-f'') and the normal branch (-f'' - |g'|^2 f).
SegmentSpectrum segment_spectrum(const GeodesicSegment& seg, int n_modes);

struct ConjugatePoints {
  int count = 0;            // interior zeros of the Jacobi field
  bool endpoint_zero = false;  // J(L) ~ 0: a nullity, not an index, contribution
};

// Shoots J'' + K J = 0, J(0) = 0, J'(0) = 1 with the sectional curvature of
// the target along the segment and counts interior sign changes.
ConjugatePoints conjugate_points(const GeodesicSegment& seg);

std::string segment_spectrum_to_json(const SegmentSpectrum& sp, double length);

}  // namespace necklab
