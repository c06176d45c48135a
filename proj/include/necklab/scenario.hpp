#pragma once

// Scenario configuration: a flat, versioned key-value text format that
// hashes stably for caching and reproducibility.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace necklab {

enum class Family { torus_winding, dirichlet_neck, theta_wrap };

const char* family_name(Family f);
Family family_from_name(const std::string& s);

// One degeneration step: collar length T (the torus adds a 2 pi / rho thick
// seam on top) and the grid resolution.
struct ScenarioStep {
  double T = 0;
  int n_t = 0;
  int n_theta = 0;
};

struct Scenario {
  int version = 1;
  std::string name = "unnamed";
  std::string target_name = "sphere";
  int target_dim = 2;
  Family family = Family::torus_winding;
  int winding = 1;
  Eigen::Vector3d p_end{1, 0, 0};
  Eigen::Vector3d q_end{0, 1, 0};
  double end_ripple = 0.01;   // geodesic-circle radius of the neck ends
  std::vector<ScenarioStep> steps;
  double rho = 0;             // 0: default pi
  double beta = 0.5;
  double sigma = 0.25;
  double zero_tol = 0;        // 0: auto 0.5 h_t^2
  double solve_tol = 1e-9;
  long max_iter = 400000;
  uint64_t seed = 1;
  double init_noise = 0.0;
  double band_lo = 0.25, band_hi = 0.75;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Stable serialization (fixed key order, %.17g floats); hash input and the
// canonical form written next to reports.
std::string canonical_scenario(const Scenario& sc);
uint64_t scenario_hash(const Scenario& sc);

uint64_t fnv1a64(std::string_view bytes);
std::string format_g17(double x);

}  // namespace necklab
