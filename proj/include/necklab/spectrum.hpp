#pragma once

// Second variation of the Dirichlet energy, the weighted Jacobi eigenproblem
// and its index/nullity bookkeeping, and the junction Rayleigh test.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

#include "necklab/harmonic.hpp"
#include "necklab/map.hpp"
#include "necklab/weights.hpp"

namespace necklab {

// Quadrature of int |dw|^2 - <A(du,du), A(w,w)>; for the sphere this is
// int |dw|^2 - |du|^2 |w|^2.  w must be tangent along u and vanish on
// Dirichlet rows.
double second_variation(const DiscreteMap& u, const TangentField& w);

// Q_u in per-node orthonormal tangent coordinates: x' A x = second_variation
// of the represented field, M = diag(weight * cell area) per tangent branch.
struct JacobiSystem {
  Eigen::SparseMatrix<double> A;       // symmetric
  Eigen::VectorXd M;                   // weighted mass diagonal
  Eigen::VectorXd M_uniform;           // plain area diagonal
  std::vector<int> dof_of_node;        // -1 on Dirichlet nodes
  std::vector<Eigen::MatrixXd> frames; // per free node, ambient_dim x n
  int branches = 0;                    // tangent dimension n
  int dofs() const { return int(M.size()); }

  // expand coordinates into an ambient tangent field over the grid
  TangentField expand(const DiscreteMap& u, const Eigen::VectorXd& x) const;
  Eigen::VectorXd restrict_field(const DiscreteMap& u, const TangentField& w) const;
};

JacobiSystem assemble_jacobi(const DiscreteMap& u, const WeightField& weight);

enum class EigenMode { full, lowest_k };

struct SpectrumOptions {
  EigenMode mode = EigenMode::full;
  int k = 8;                     // minimum eigenvalues reported in lowest_k mode
  double ceiling = std::numeric_limits<double>::quiet_NaN();  // report all below this
  double zero_tol = 1e-8;
  bool normalize_weight = true;  // rescale the weight to unit area-mean
  bool want_vectors = false;     // full mode only
  double bisect_tol = 1e-10;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending; all (full) or all below `ceiling`
  double zero_tol = 0;
  int index = 0;    // # eigenvalues < -zero_tol
  int nullity = 0;  // # eigenvalues with |l| <= zero_tol
  double ceiling = std::numeric_limits<double>::infinity();
  bool truncated = false;
  double weight_scale = 1.0;  // area-mean the weight was divided by
  std::string weight_kind = "uniform";
  int dimension = 2;
  std::vector<double> near_tol;  // |l| within a factor 10 of zero_tol
  std::optional<Eigen::MatrixXd> vectors;  // columns follow `eigenvalues`

  int extended() const { return index + nullity; }
};

SpectrumReport solve_spectrum(const JacobiSystem& sys, const SpectrumOptions& opts);

struct ExtendedIndex {
  int index = 0;
  int nullity = 0;
  int extended = 0;
  bool ambiguous = false;  // some eigenvalue within 10x of the zero_tol boundary
};

ExtendedIndex extended_index(const SpectrumReport& report);

struct RayleighResult {
  double min_ratio = 0;
  std::vector<double> ratios;
};

// Random tangent fields supported strictly inside one junction region;
// returns Q_u(w) / int |w|^2 frak_w for each trial.
RayleighResult rayleigh_neck_test(const DiscreteMap& u, const CollarLayout& layout, double sigma,
                                  JunctionSide side, int trials, uint64_t seed);

std::string spectrum_to_json(const SpectrumReport& report, const std::string& scenario_key);

}  // namespace necklab
