#include "necklab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace necklab {

namespace {

int auto_samples(double length) {
  return std::max(64, int(std::ceil(16.0 * length))) + 1;  // intervals + 1 nodes
}

// unit normal to the curve direction at p, picked deterministically
Eigen::VectorXd unit_normal(const TargetManifold& target, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& dir) {
  const Eigen::MatrixXd frame = tangent_frame(target, p);
  const Eigen::VectorXd d = dir.normalized();
  Eigen::VectorXd best;
  double best_norm = -1.0;
  for (int c = 0; c < frame.cols(); ++c) {
    Eigen::VectorXd w = frame.col(c) - frame.col(c).dot(d) * d;
    if (w.norm() > best_norm) {
      best_norm = w.norm();
      best = w;
    }
  }
  if (best_norm < 1e-8) throw std::runtime_error("unit_normal: curve direction spans the tangent space");
  return best / best_norm;
}

}  // namespace

GeodesicSegment make_segment(const Eigen::VectorXd& start, const Eigen::VectorXd& tangent,
                             double length, std::shared_ptr<const TargetManifold> target,
                             int n_samples) {
  if (!(length > 0.0)) throw std::invalid_argument("make_segment: length must be positive");
  GeodesicSegment seg;
  seg.start = target->project(start);
  Eigen::VectorXd v = target->tangent_projector(seg.start) * tangent;
  const double vn = v.norm();
  if (vn < 1e-12) throw std::invalid_argument("make_segment: tangent is normal to the target");
  seg.tangent = v / vn;
  seg.length = length;
  seg.n_samples = n_samples > 1 ? n_samples : auto_samples(length);
  seg.target = std::move(target);
  return seg;
}

Eigen::VectorXd segment_point(const GeodesicSegment& seg, double s) {
  return seg.target->geodesic_point(seg.start, seg.tangent, s);
}

double segment_speed_defect(const GeodesicSegment& seg) {
  const int n = seg.n_samples;
  const double h = seg.length / (n - 1);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = seg.target->distance(segment_point(seg, i * h), segment_point(seg, (i + 1) * h));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return (hi - lo) / h;
}

double geodesic_second_variation(const GeodesicSegment& seg,
                                 const std::vector<Eigen::VectorXd>& v) {
  const int n = seg.n_samples;
  if (int(v.size()) != n) throw std::invalid_argument("geodesic_second_variation: sample count mismatch");
  if (v.front().norm() > 1e-12 || v.back().norm() > 1e-12)
    throw std::invalid_argument("geodesic_second_variation: field must vanish at the endpoints");
  const double h = seg.length / (n - 1);

  double q = 0.0;
  for (int i = 0; i + 1 < n; ++i) q += (v[i + 1] - v[i]).squaredNorm() / h;

  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    const Eigen::VectorXd p = segment_point(seg, i * h);
    Eigen::VectorXd vel;
    if (i == 0)
      vel = (segment_point(seg, h) - p) / h;
    else if (i == n - 1)
      vel = (p - segment_point(seg, (n - 2) * h)) / h;
    else
      vel = (segment_point(seg, (i + 1) * h) - segment_point(seg, (i - 1) * h)) / (2.0 * h);
    const Eigen::VectorXd a_gg = seg.target->second_form(p, vel, vel);
    const Eigen::VectorXd a_vv = seg.target->second_form(p, v[i], v[i]);
    q -= w * a_gg.dot(a_vv);
  }
  return q;
}

SegmentSpectrum segment_spectrum(const GeodesicSegment& seg, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("segment_spectrum: n_modes must be >= 1");
  const int n = seg.n_samples;
  const int interior = n - 2;
  const double h = seg.length / (n - 1);

  // curvature of the normal branch: <A(g',g'), A(n,n)> along the segment
  Eigen::VectorXd curv(interior);
  for (int i = 1; i <= interior; ++i) {
    const Eigen::VectorXd p = segment_point(seg, i * h);
    const Eigen::VectorXd vel =
        (segment_point(seg, (i + 1) * h) - segment_point(seg, (i - 1) * h)) / (2.0 * h);
    const Eigen::VectorXd nrm = unit_normal(*seg.target, p, vel);
    curv[i - 1] = seg.target->second_form(p, vel, vel).dot(seg.target->second_form(p, nrm, nrm));
  }

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(interior, interior);
  for (int i = 0; i < interior; ++i) {
    lap(i, i) = 2.0 / (h * h);
    if (i + 1 < interior) {
      lap(i, i + 1) = -1.0 / (h * h);
      lap(i + 1, i) = -1.0 / (h * h);
    }
  }

  SegmentSpectrum out;
  out.zero_tol = 0.5 * h * h;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tang(lap, Eigen::EigenvaluesOnly);
  Eigen::MatrixXd norm_op = lap;
  norm_op.diagonal() -= curv;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> norm(norm_op, Eigen::EigenvaluesOnly);

  auto counts = [&](const Eigen::VectorXd& ev, int& idx, int& nul) {
    idx = nul = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] < -out.zero_tol)
        ++idx;
      else if (ev[i] <= out.zero_tol)
        ++nul;
    }
  };
  int t_idx = 0, t_nul = 0;
  counts(norm.eigenvalues(), out.normal_index, out.normal_nullity);
  counts(tang.eigenvalues(), t_idx, t_nul);

  const int normals = seg.target->intrinsic_dim() - 1;
  out.index = normals * out.normal_index + t_idx;
  out.nullity = normals * out.normal_nullity + t_nul;

  const int keep_n = std::min<int>(n_modes, interior);
  out.normal_eigenvalues.assign(norm.eigenvalues().data(), norm.eigenvalues().data() + keep_n);
  out.tangential_eigenvalues.assign(tang.eigenvalues().data(), tang.eigenvalues().data() + keep_n);
  return out;
}

ConjugatePoints conjugate_points(const GeodesicSegment& seg) {
  if (seg.length > 64.0 * std::numbers::pi)
    throw std::invalid_argument("conjugate_points: length above 64 pi, integrator tolerance not certified");
  const long steps = std::max<long>(2000, long(std::ceil(seg.length * 2000.0)));
  const double h = seg.length / steps;

  // curvature along the segment; cached per RK4 cell
  auto curvature = [&](double s) {
    const Eigen::VectorXd p = segment_point(seg, s);
    const double ds = std::min(1e-4, seg.length * 1e-6);
    const Eigen::VectorXd vel = (segment_point(seg, s + ds) - segment_point(seg, s - ds)) / (2.0 * ds);
    const Eigen::VectorXd nrm = unit_normal(*seg.target, p, vel);
    return seg.target->second_form(p, vel, vel).dot(seg.target->second_form(p, nrm, nrm));
  };

  ConjugatePoints out;
  double j = 0.0, dj = 1.0;
  double last_sign = 0.0;
  for (long i = 0; i < steps; ++i) {
    const double s = i * h;
    const double k1 = curvature(s);
    const double k2 = curvature(s + 0.5 * h);
    const double k3 = curvature(s + h);
    // RK4 for (j, dj)' = (dj, -k j)
    const double a1 = dj, b1 = -k1 * j;
    const double a2 = dj + 0.5 * h * b1, b2 = -k2 * (j + 0.5 * h * a1);
    const double a3 = dj + 0.5 * h * b2, b3 = -k2 * (j + 0.5 * h * a2);
    const double a4 = dj + h * b3, b4 = -k3 * (j + h * a3);
    j += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    dj += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);

    if (i == 0) {
      last_sign = j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0);
      continue;
    }
    const double sign = j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0);
    const bool at_end = (i == steps - 1);
    if (sign != 0.0 && last_sign != 0.0 && sign != last_sign && !at_end) ++out.count;
    if (sign != 0.0) last_sign = sign;
  }
  out.endpoint_zero = std::abs(j) < 1e-3;
  // a sign flip right at the end is the endpoint zero, not an interior one
  return out;
}

std::string segment_spectrum_to_json(const SegmentSpectrum& sp, double length) {
  nlohmann::json j;
  j["dimension"] = 1;
  j["length"] = length;
  j["zero_tol"] = sp.zero_tol;
  j["normal"] = {{"index", sp.normal_index},
                 {"nullity", sp.normal_nullity},
                 {"eigenvalues", sp.normal_eigenvalues}};
  j["tangential_eigenvalues"] = sp.tangential_eigenvalues;
  j["index"] = sp.index;
  j["nullity"] = sp.nullity;
  j["extended_index"] = sp.extended();
  return j.dump(2);
}

}  // namespace necklab
