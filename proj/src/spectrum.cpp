#include "necklab/spectrum.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace necklab {

double second_variation(const DiscreteMap& u, const TangentField& w) {
  const CylinderGrid& g = u.grid;
  const double wt = g.h_theta / g.h_t;
  const double wth = g.h_t / g.h_theta;
  double q = 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    const int ip = g.iplus(i);
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      if (ip >= 0) q += wt * (w.values.col(g.node(ip, j)) - w.values.col(k)).squaredNorm();
      const double f = g.boundary_row(i) ? 0.5 : 1.0;
      q += f * wth * (w.values.col(g.node(i, g.jplus(j))) - w.values.col(k)).squaredNorm();
    }
  }
  // potential: <S(grad u) w, w> nodewise from centered differences
  for (int i = 0; i < g.n_t; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      const Eigen::VectorXd& wk = w.values.col(k);
      if (wk.isZero(0.0)) continue;
      auto [dt, dth] = node_gradient(u, i, j);
      const Eigen::MatrixXd S = u.target->shape_potential(u.values.col(k), {dt, dth});
      q -= g.cell_area(i) * wk.dot(S * wk);
    }
  }
  return q;
}

TangentField JacobiSystem::expand(const DiscreteMap& u, const Eigen::VectorXd& x) const {
  TangentField w = zero_field(u);
  for (int k = 0; k < u.grid.num_nodes(); ++k) {
    const int d = dof_of_node[k];
    if (d < 0) continue;
    w.values.col(k) = frames[d / branches] * x.segment(d, branches);
  }
  return w;
}

Eigen::VectorXd JacobiSystem::restrict_field(const DiscreteMap& u, const TangentField& w) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs());
  for (int k = 0; k < u.grid.num_nodes(); ++k) {
    const int d = dof_of_node[k];
    if (d < 0) continue;
    x.segment(d, branches) = frames[d / branches].transpose() * w.values.col(k);
  }
  return x;
}

JacobiSystem assemble_jacobi(const DiscreteMap& u, const WeightField& weight) {
  const CylinderGrid& g = u.grid;
  if (weight.values.size() != g.num_nodes())
    throw std::invalid_argument("assemble_jacobi: weight size mismatch");
  if (!(weight.min() > 0.0)) throw std::invalid_argument("assemble_jacobi: weight must be positive");

  JacobiSystem sys;
  const int n = u.target->intrinsic_dim();
  sys.branches = n;
  sys.dof_of_node.assign(g.num_nodes(), -1);
  int next = 0;
  for (int k = 0; k < g.num_nodes(); ++k) {
    if (u.is_fixed(k)) continue;
    sys.dof_of_node[k] = next;
    next += n;
  }
  const int N = next;
  sys.frames.reserve(N / n);
  for (int k = 0; k < g.num_nodes(); ++k)
    if (sys.dof_of_node[k] >= 0) sys.frames.push_back(tangent_frame(*u.target, u.values.col(k)));

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(N) * (2 * n + 3));
  auto add_block = [&](int da, int db, const Eigen::MatrixXd& blk) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (blk(r, c) != 0.0) trip.emplace_back(da + r, db + c, blk(r, c));
  };
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

  auto add_edge = [&](int ka, int kb, double w_e) {
    const int da = sys.dof_of_node[ka], db = sys.dof_of_node[kb];
    if (da >= 0) add_block(da, da, w_e * eye);
    if (db >= 0) add_block(db, db, w_e * eye);
    if (da >= 0 && db >= 0) {
      const Eigen::MatrixXd gram = sys.frames[da / n].transpose() * sys.frames[db / n];
      add_block(da, db, -w_e * gram);
      add_block(db, da, -w_e * gram.transpose());
    }
  };

  const double wt = g.h_theta / g.h_t;
  const double wth = g.h_t / g.h_theta;
  for (int i = 0; i < g.n_t; ++i) {
    const int ip = g.iplus(i);
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      if (ip >= 0) add_edge(k, g.node(ip, j), wt);
      const double f = g.boundary_row(i) ? 0.5 : 1.0;
      add_edge(k, g.node(i, g.jplus(j)), f * wth);
    }
  }

  // potential blocks and mass diagonals
  sys.M.resize(N);
  sys.M_uniform.resize(N);
  for (int i = 0; i < g.n_t; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      const int d = sys.dof_of_node[k];
      if (d < 0) continue;
      const double area = g.cell_area(i);
      auto [dt, dth] = node_gradient(u, i, j);
      const Eigen::MatrixXd S = u.target->shape_potential(u.values.col(k), {dt, dth});
      const Eigen::MatrixXd& B = sys.frames[d / n];
      add_block(d, d, -area * (B.transpose() * S * B));
      for (int c = 0; c < n; ++c) {
        sys.M[d + c] = weight.values[k] * area;
        sys.M_uniform[d + c] = area;
      }
    }
  }

  sys.A.resize(N, N);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

namespace {

// Counts eigenvalues of (A, M) below tau through the inertia of A - tau M.
class InertiaCounter {
 public:
  InertiaCounter(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& M) : A_(A), M_(M) {
    Eigen::SparseMatrix<double> shifted = shift(0.0);
    ldlt_.analyzePattern(shifted);
  }

  int count_below(double tau) {
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
    double t = tau;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::SparseMatrix<double> shifted = shift(t);
      ldlt_.factorize(shifted);
      if (ldlt_.info() == Eigen::Success) {
        const Eigen::VectorXd d = ldlt_.vectorD();
        bool clean = true;
        int neg = 0;
        for (int i = 0; i < d.size(); ++i) {
          if (!std::isfinite(d[i]) || d[i] == 0.0) { clean = false; break; }
          if (d[i] < 0.0) ++neg;
        }
        if (clean) {
          cache_[tau] = neg;
          return neg;
        }
      }
      t = tau + (attempt + 1) * 1e-11 * (1.0 + std::abs(tau));  // nudge off a null pivot
    }
    throw std::runtime_error("solve_spectrum: LDL^T factorization breakdown");
  }

 private:
  Eigen::SparseMatrix<double> shift(double tau) const {
    Eigen::SparseMatrix<double> s = A_;
    for (int i = 0; i < M_.size(); ++i) s.coeffRef(i, i) -= tau * M_[i];
    return s;
  }

  const Eigen::SparseMatrix<double>& A_;
  const Eigen::VectorXd& M_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>> ldlt_;
  std::map<double, int> cache_;
};

std::pair<double, double> gershgorin_bounds(const Eigen::SparseMatrix<double>& A,
                                            const Eigen::VectorXd& M) {
  const int N = int(M.size());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N), radius = Eigen::VectorXd::Zero(N);
  for (int col = 0; col < A.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      if (it.row() == it.col())
        diag[it.row()] += it.value();
      else
        radius[it.row()] += std::abs(it.value());
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < N; ++i) {
    lo = std::min(lo, (diag[i] - radius[i]) / M[i]);
    hi = std::max(hi, (diag[i] + radius[i]) / M[i]);
  }
  return {lo, hi};
}

void classify(SpectrumReport& rep) {
  rep.near_tol.clear();
  for (double l : rep.eigenvalues) {
    const double a = std::abs(l);
    if (a >= 0.1 * rep.zero_tol && a <= 10.0 * rep.zero_tol) rep.near_tol.push_back(l);
  }
}

}  // namespace

SpectrumReport solve_spectrum(const JacobiSystem& sys, const SpectrumOptions& opts) {
  const int N = sys.dofs();
  if (N == 0) throw std::invalid_argument("solve_spectrum: empty system");
  const double mcond = sys.M.maxCoeff() / sys.M.minCoeff();
  if (!(sys.M.minCoeff() > 0.0) || mcond > 1e14) {
    std::ostringstream msg;
    msg << "solve_spectrum: mass matrix ill-conditioned, cond(M) = " << mcond;
    throw std::runtime_error(msg.str());
  }

  SpectrumReport rep;
  rep.zero_tol = opts.zero_tol;

  // normalize the weight to unit area-mean so eigenvalue scales (and the
  // zero_tol band) are comparable across weight choices
  double scale = 1.0;
  if (opts.normalize_weight) scale = sys.M.sum() / sys.M_uniform.sum();
  rep.weight_scale = scale;
  const Eigen::VectorXd M = sys.M / scale;

  const double tiny = 1e-12 * (1.0 + opts.zero_tol);

  if (opts.mode == EigenMode::full) {
    Eigen::VectorXd dinv = M.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd B = Eigen::MatrixXd(sys.A);
    B = dinv.asDiagonal() * B * dinv.asDiagonal();
    B = 0.5 * (B + B.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        B, opts.want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("solve_spectrum: dense eigensolver failed");
    rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + N);
    if (opts.want_vectors) rep.vectors = dinv.asDiagonal() * es.eigenvectors();
    for (double l : rep.eigenvalues) {
      if (l < -opts.zero_tol - tiny)
        ++rep.index;
      else if (l <= opts.zero_tol + tiny)
        ++rep.nullity;
    }
    classify(rep);
    return rep;
  }

  // lowest-k mode: Sylvester inertia counts plus bisection for the values
  InertiaCounter counter(sys.A, M);
  rep.truncated = true;
  rep.index = counter.count_below(-opts.zero_tol - tiny);
  rep.nullity = counter.count_below(opts.zero_tol + tiny) - rep.index;

  auto [lo, hi] = gershgorin_bounds(sys.A, M);
  lo -= 1e-8;
  hi += 1e-8;

  // eigenvalue j (1-based): smallest tau with count(tau) >= j
  auto kth_value = [&](int j) {
    double a = lo, b = hi;
    while (b - a > opts.bisect_tol) {
      const double mid = 0.5 * (a + b);
      if (counter.count_below(mid) >= j)
        b = mid;
      else
        a = mid;
    }
    return 0.5 * (a + b);
  };

  double ceiling = opts.ceiling;
  if (!std::isfinite(ceiling)) {
    ceiling = std::max(10.0 * opts.zero_tol, 0.0);
    const int want = std::min(std::max(opts.k, rep.index + rep.nullity), N);
    if (counter.count_below(ceiling) < want && want >= 1)
      ceiling = kth_value(want) + std::max(1e-6, 10.0 * opts.bisect_tol);
  }
  rep.ceiling = ceiling;

  const int found = std::min(counter.count_below(ceiling), N);
  rep.eigenvalues.resize(found);
  for (int j = 1; j <= found; ++j) rep.eigenvalues[j - 1] = kth_value(j);
  classify(rep);
  return rep;
}

ExtendedIndex extended_index(const SpectrumReport& report) {
  ExtendedIndex out;
  out.index = report.index;
  out.nullity = report.nullity;
  out.extended = report.index + report.nullity;
  out.ambiguous = !report.near_tol.empty();
  return out;
}

RayleighResult rayleigh_neck_test(const DiscreteMap& u, const CollarLayout& layout, double sigma,
                                  JunctionSide side, int trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("rayleigh_neck_test: trials must be >= 1");
  const auto [outer, inner] = junction_regions(layout.p, sigma);
  const JunctionRegion region = (side == JunctionSide::outer) ? outer : inner;
  // chart t -> grid t: the collar starts at layout.t_start
  const double chart0 = layout.p.t_lo();
  const double lo = layout.t_start + (region.t_lo - chart0);
  const double hi = layout.t_start + (region.t_hi - chart0);

  const CylinderGrid& g = u.grid;
  std::vector<int> rows;
  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i);
    if (t > lo + 1e-12 && t < hi - 1e-12 && !g.boundary_row(i)) rows.push_back(i);
  }
  if (rows.empty()) throw std::invalid_argument("rayleigh_neck_test: junction region holds no grid rows");

  const WeightField frak = weight_frak(g, layout, sigma, /*extend_off_collar=*/true);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = u.target->ambient_dim();

  RayleighResult out;
  out.ratios.reserve(trials);
  for (int trial = 0; trial < trials; ++trial) {
    TangentField w = zero_field(u);
    double norm2 = 0.0;
    for (int attempt = 0; attempt < 16 && norm2 == 0.0; ++attempt) {
      norm2 = 0.0;
      for (int i : rows) {
        for (int j = 0; j < g.n_theta; ++j) {
          const int k = g.node(i, j);
          if (u.is_fixed(k)) continue;
          Eigen::VectorXd v(m);
          for (int c = 0; c < m; ++c) v(c) = gauss(rng);
          w.values.col(k) = u.target->tangent_projector(u.values.col(k)) * v;
          norm2 += w.values.col(k).squaredNorm();
        }
      }
    }
    if (norm2 == 0.0) throw std::runtime_error("rayleigh_neck_test: degenerate sample persisted");

    double denom = 0.0;
    for (int i : rows)
      for (int j = 0; j < g.n_theta; ++j) {
        const int k = g.node(i, j);
        denom += g.cell_area(i) * frak.values[k] * w.values.col(k).squaredNorm();
      }
    out.ratios.push_back(second_variation(u, w) / denom);
  }
  out.min_ratio = *std::min_element(out.ratios.begin(), out.ratios.end());
  return out;
}

std::string spectrum_to_json(const SpectrumReport& report, const std::string& scenario_key) {
  nlohmann::json j;
  j["key"] = scenario_key;
  j["dimension"] = report.dimension;
  j["weight"] = report.weight_kind;
  j["weight_scale"] = report.weight_scale;
  j["zero_tol"] = report.zero_tol;
  j["index"] = report.index;
  j["nullity"] = report.nullity;
  j["extended_index"] = report.extended();
  j["truncated"] = report.truncated;
  if (report.truncated) j["ceiling"] = report.ceiling;
  j["eigenvalues"] = report.eigenvalues;
  j["near_zero_tol"] = report.near_tol;
  return j.dump(2);
}

}  // namespace necklab
