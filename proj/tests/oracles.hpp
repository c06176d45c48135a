#pragma once

// Test-only oracles, independent of the library code paths they check:
//  - Fourier mode enumeration for equator-winding maps on flat tori,
//  - a layer-cake quadrature for the Lorentz L^{2,1} integral,
//  - closed-form tension of a phase-modulated winding map.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// Eigenvalues of the second-variation operator at the winding map
// u(t) = (cos at, sin at, 0) on the flat torus [0, T] x S^1 into S^2:
// normal branch (2 pi p / T)^2 + q^2 - a^2, tangential (2 pi p / T)^2 + q^2.
inline std::vector<double> winding_modes(double t_total, int winding, int p_max, int q_max,
                                         double below) {
  const double alpha = 2.0 * kPi * winding / t_total;
  std::vector<double> out;
  for (int p = -p_max; p <= p_max; ++p) {
    for (int q = -q_max; q <= q_max; ++q) {
      const double base = std::pow(2.0 * kPi * p / t_total, 2) + double(q) * q;
      if (base - alpha * alpha < below) out.push_back(base - alpha * alpha);  // normal
      if (base < below) out.push_back(base);                                 // tangential
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> winding_lowest(double t_total, int winding, int count) {
  std::vector<double> all = winding_modes(t_total, winding, 16, 4, 1e9);
  all.resize(count);
  return all;
}

// 2 int_0^inf mu{|f| >= s}^(1/2) ds for a step function, integrated by
// quadrature on each continuity interval of the (piecewise constant)
// distribution function; `nodes` sampling points in total.
inline double l21_layer_cake(const std::vector<double>& values, const std::vector<double>& areas,
                             int nodes) {
  std::vector<double> levels{0.0};
  for (double v : values) levels.push_back(std::abs(v));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto mu = [&](double s) {
    double m = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
      if (std::abs(values[i]) >= s) m += areas[i];
    return m;
  };

  const int per = std::max(2, nodes / std::max<int>(1, int(levels.size()) - 1));
  double acc = 0.0;
  for (size_t k = 0; k + 1 < levels.size(); ++k) {
    const double a = levels[k], b = levels[k + 1];
    const double h = (b - a) / per;
    for (int i = 0; i < per; ++i) acc += std::sqrt(mu(a + (i + 0.5) * h)) * h;  // midpoint rule
  }
  return 2.0 * acc;
}

// Phase-modulated equator map v(t) = (cos f(t), sin f(t), 0) with
// f(t) = a t + eps sin(2 pi m t / T): tension field P_v(Delta v) = f'' e_1,
// |tension| = |f''| = eps (2 pi m / T)^2 |sin(2 pi m t / T)|.
struct ModulatedWinding {
  double t_total;
  int winding;
  double eps;
  int m;

  double phase(double t) const {
    return 2.0 * kPi * winding / t_total * t + eps * std::sin(2.0 * kPi * m * t / t_total);
  }
  double tension_norm(double t) const {
    const double w = 2.0 * kPi * m / t_total;
    return eps * w * w * std::abs(std::sin(w * t));
  }
};

}  // namespace oracles
