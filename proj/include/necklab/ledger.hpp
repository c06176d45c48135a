#pragma once

// Degeneration-sweep orchestration: per-step solves, weighted spectra, neck
// diagnostics, the limit-side index bookkeeping and the two inequality
// verdicts.

#include <string>
#include <vector>

#include "necklab/map.hpp"
#include "necklab/scenario.hpp"

namespace necklab {

struct StepRecord {
  int step = 0;
  double T = 0;        // collar length
  double T_total = 0;  // torus length (or cylinder length)
  int n_t = 0, n_theta = 0;
  bool converged = false;
  bool cached = false;
  long iterations = 0;
  double energy = 0;
  double residual_sup = 0;
  double zero_tol = 0;
  double lambda = 0;
  int ind_uniform = 0, null_uniform = 0;
  int ind_omega = 0, null_omega = 0;
  bool sylvester_ok = false;
  std::vector<double> low_eigenvalues;  // uniform weight
  double junction_l21_outer = 0, junction_l21_inner = 0;
  double sup_dtheta_band = 0, sup_ds_band = 0;
  double fit_residual = 0, fit_residual_raw = 0, fit_speed_s = 0;
  double pointwise_ratio_max = 0, angular_ratio_max = 0;
  double rayleigh_min = std::numeric_limits<double>::quiet_NaN();
  bool verdict_upper = false, verdict_lower = false;

  int extended_omega() const { return ind_omega + null_omega; }
};

struct LimitSide {
  int u_ind = 0, u_null = 0;              // base-map counts, single-component convention
  int u_ind_split = 0, u_null_split = 0;  // both nodal components counted separately
  std::string u_convention;
  double segment_length = 0;
  int seg_ind = 0, seg_null = 0;          // all branches
  int seg_normal_ind = 0, seg_normal_null = 0;

  int upper_bound() const { return u_ind + u_null + seg_ind + seg_null; }
  int lower_bound() const { return u_ind + seg_ind; }
};

struct IndexLedger {
  Scenario scenario;
  uint64_t scenario_key = 0;
  std::vector<StepRecord> steps;
  LimitSide limit;
  bool verdict_upper_all = false;
  bool verdict_lower_all = false;
  bool complete = false;
  int failed_step = -1;

  // 0 ok, 2 non-convergence, 3 inequality violation
  int exit_code() const;
};

struct RunOptions {
  std::string cache_dir;          // empty disables the cache
  int rayleigh_trials = 0;        // > 0: run the junction Rayleigh test on the last step
  uint64_t rayleigh_seed = 1234;
  bool keep_maps = false;
  bool quiet = true;
};

struct RunResult {
  IndexLedger ledger;
  std::vector<DiscreteMap> maps;  // populated when keep_maps
};

RunResult run_scenario(const Scenario& sc, const RunOptions& opts = {});

// Verdicts are pure functions of the stored integers.
bool verdict_upper(const StepRecord& s, const LimitSide& lim);
bool verdict_lower(const StepRecord& s, const LimitSide& lim);

std::string ledger_to_json(const IndexLedger& ledger);
IndexLedger ledger_from_json(const std::string& text);

// Builders used by run_scenario, exposed for the CLI and tests.
DiscreteMap build_initial_map(const Scenario& sc, const ScenarioStep& step);
CylinderGrid scenario_grid(const Scenario& sc, const ScenarioStep& step);
CollarParams scenario_collar(const Scenario& sc, const ScenarioStep& step);

struct ScheduleSolve {
  std::vector<DiscreteMap> maps;      // lifted to the scenario target
  std::vector<long> iterations;
  std::vector<bool> cached;
  std::vector<bool> converged;
  std::vector<double> energies;
  int failed_step = -1;
};

// The continuation solves of a scenario, with caching; no spectra or
// diagnostics.
ScheduleSolve solve_schedule(const Scenario& sc, const std::string& cache_dir);

}  // namespace necklab
