#pragma once

// Discrete harmonic maps: Dirichlet energy, tension residual, projected
// gradient minimization, continuation across a degeneration sweep.

#include <functional>
#include <vector>

#include "necklab/map.hpp"

namespace necklab {

// Second-order quadrature of int |grad u|^2 (edge-based; theta-periodic,
// trapezoid weights at cylinder ends).
double dirichlet_energy(const DiscreteMap& u);

// Tangent part of the 5-point Laplacian, r = P_u(Delta_h u).  Zero on
// Dirichlet rows; cylinder grids require boundary data.
TangentField tension_residual(const DiscreteMap& u);

struct SolveOptions {
  double tol = 1e-8;        // sup-norm of the tension residual
  long max_iter = 400000;
  double armijo_c1 = 1e-2;
  double tau0 = 0.0;        // 0: stability-scale seed
  bool track_energy = false;
};

struct SolveReport {
  long iterations = 0;
  double energy = 0.0;
  double residual_sup = 0.0;
  bool converged = false;
  std::vector<double> energy_trace;  // filled when track_energy
};

// Projected gradient descent u <- project(u + tau * P_u Delta_h u) with
// Armijo backtracking on the discrete energy.  Energy is non-increasing
// across accepted steps; returns the best iterate when max_iter runs out.
std::pair<DiscreteMap, SolveReport> solve_harmonic(DiscreteMap init, const SolveOptions& opts = {});

struct ContinuationResult {
  std::vector<DiscreteMap> maps;
  std::vector<SolveReport> reports;
  int failed_step = -1;  // index of the first non-converged step, -1 if none
};

// Solves a schedule of grids; step 0 starts from make_init, later steps
// resample the previous solution in the s = t/T coordinate.  impose_bc may
// re-stamp Dirichlet rows after each init (pass nullptr when not needed).
ContinuationResult continuation_sweep(const std::vector<CylinderGrid>& grids,
                                      const std::function<DiscreteMap(const CylinderGrid&)>& make_init,
                                      const std::function<void(DiscreteMap&)>& impose_bc,
                                      const SolveOptions& opts = {});

}  // namespace necklab
