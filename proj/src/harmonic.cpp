#include "necklab/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace necklab {

double dirichlet_energy(const DiscreteMap& u) {
  const CylinderGrid& g = u.grid;
  const double wt = g.h_theta / g.h_t;   // t-edge weight
  const double wth = g.h_t / g.h_theta;  // theta-edge weight
  double e = 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    const int ip = g.iplus(i);
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      if (ip >= 0) e += wt * (u.values.col(g.node(ip, j)) - u.values.col(k)).squaredNorm();
      // theta edges in boundary rows sit over half cells
      const double f = g.boundary_row(i) ? 0.5 : 1.0;
      e += f * wth * (u.values.col(g.node(i, g.jplus(j))) - u.values.col(k)).squaredNorm();
    }
  }
  return e;
}

namespace {

// 5-point Laplacian at (i, j); caller guarantees an interior (or periodic) row.
Eigen::VectorXd laplacian(const DiscreteMap& u, int i, int j) {
  const CylinderGrid& g = u.grid;
  const int k = g.node(i, j);
  const Eigen::VectorXd& c = u.values.col(k);
  Eigen::VectorXd lap =
      (u.values.col(g.node(g.iplus(i), j)) + u.values.col(g.node(g.iminus(i), j)) - 2.0 * c) /
      (g.h_t * g.h_t);
  lap += (u.values.col(g.node(i, g.jplus(j))) + u.values.col(g.node(i, g.jminus(j))) - 2.0 * c) /
         (g.h_theta * g.h_theta);
  return lap;
}

}  // namespace

TangentField tension_residual(const DiscreteMap& u) {
  const CylinderGrid& g = u.grid;
  if (!g.t_periodic && !u.has_bc())
    throw std::invalid_argument("tension_residual: cylinder grid without Dirichlet data");
  TangentField r = zero_field(u);
  for (int i = 0; i < g.n_t; ++i) {
    if (g.boundary_row(i)) continue;  // Dirichlet rows are dropped
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      if (u.is_fixed(k)) continue;
      const Eigen::VectorXd lap = laplacian(u, i, j);
      r.values.col(k) = u.target->tangent_projector(u.values.col(k)) * lap;
    }
  }
  return r;
}

namespace {

// E(trial) - E(u), accumulated edge-wise through (a'-a).(a'+a); resolves
// decrements far below the ulp of the total energy, which a direct
// subtraction of two O(1) energies cannot.
double energy_delta(const DiscreteMap& u, const DiscreteMap& trial) {
  const CylinderGrid& g = u.grid;
  const double wt = g.h_theta / g.h_t;
  const double wth = g.h_t / g.h_theta;
  double d = 0.0;
  auto edge = [&](int ka, int kb, double w_e) {
    const Eigen::VectorXd a = u.values.col(kb) - u.values.col(ka);
    const Eigen::VectorXd b = trial.values.col(kb) - trial.values.col(ka);
    d += w_e * (b - a).dot(b + a);
  };
  for (int i = 0; i < g.n_t; ++i) {
    const int ip = g.iplus(i);
    for (int j = 0; j < g.n_theta; ++j) {
      const int k = g.node(i, j);
      if (ip >= 0) edge(k, g.node(ip, j), wt);
      const double f = g.boundary_row(i) ? 0.5 : 1.0;
      edge(k, g.node(i, g.jplus(j)), f * wth);
    }
  }
  return d;
}

}  // namespace

std::pair<DiscreteMap, SolveReport> solve_harmonic(DiscreteMap init, const SolveOptions& opts) {
  DiscreteMap u = std::move(init);
  const CylinderGrid& g = u.grid;
  SolveReport rep;

  // project the init onto the target once
  for (int k = 0; k < g.num_nodes(); ++k)
    if (!u.is_fixed(k)) u.values.col(k) = u.target->project(u.values.col(k));

  double energy = dirichlet_energy(u);
  if (opts.track_energy) rep.energy_trace.push_back(energy);

  // 1/tau_stab bounds the Laplacian symbol; steps stay below the 2/lambda_max
  // stability edge so the stiffest residual modes keep contracting
  const double tau_stab = 1.0 / (4.0 / (g.h_t * g.h_t) + 4.0 / (g.h_theta * g.h_theta));
  double tau = opts.tau0 > 0.0 ? opts.tau0 : tau_stab;
  const double tau_max = 1.8 * tau_stab;

  for (long it = 0; it < opts.max_iter; ++it) {
    const TangentField r = tension_residual(u);
    const double res = r.sup_norm();
    if (res <= opts.tol) {
      rep.iterations = it;
      rep.energy = energy;
      rep.residual_sup = res;
      rep.converged = true;
      return {u, rep};
    }

    // descent slope: dE/dtau = -2 sum area |r|^2
    double slope = 0.0;
    for (int i = 0; i < g.n_t; ++i)
      for (int j = 0; j < g.n_theta; ++j)
        slope += g.cell_area(i) * r.values.col(g.node(i, j)).squaredNorm();
    slope *= 2.0;

    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      DiscreteMap trial = u;
      for (int k = 0; k < g.num_nodes(); ++k) {
        if (u.is_fixed(k)) continue;
        trial.values.col(k) = u.target->project(u.values.col(k) + tau * r.values.col(k));
      }
      const double trial_energy = dirichlet_energy(trial);
      if (trial_energy <= energy - opts.armijo_c1 * tau * slope) {
        u = std::move(trial);
        energy = trial_energy;
        accepted = true;
        break;
      }
      tau *= 0.5;
      if (tau < 1e-16) break;
    }
    if (opts.track_energy) rep.energy_trace.push_back(energy);
    if (!accepted) {
      // line search exhausted; report the best iterate
      rep.iterations = it;
      rep.energy = energy;
      rep.residual_sup = res;
      rep.converged = false;
      return {u, rep};
    }
    tau = std::min(tau * 1.5, tau_max);
  }

  rep.iterations = opts.max_iter;
  rep.energy = energy;
  rep.residual_sup = tension_residual(u).sup_norm();
  rep.converged = rep.residual_sup <= opts.tol;
  return {u, rep};
}

ContinuationResult continuation_sweep(const std::vector<CylinderGrid>& grids,
                                      const std::function<DiscreteMap(const CylinderGrid&)>& make_init,
                                      const std::function<void(DiscreteMap&)>& impose_bc,
                                      const SolveOptions& opts) {
  ContinuationResult out;
  for (size_t step = 0; step < grids.size(); ++step) {
    DiscreteMap init = (step == 0) ? make_init(grids[step]) : resample(out.maps.back(), grids[step]);
    if (impose_bc) impose_bc(init);
    auto [solved, rep] = solve_harmonic(std::move(init), opts);
    out.maps.push_back(std::move(solved));
    out.reports.push_back(rep);
    if (!rep.converged && out.failed_step < 0) {
      out.failed_step = int(step);
      break;
    }
  }
  return out;
}

}  // namespace necklab
