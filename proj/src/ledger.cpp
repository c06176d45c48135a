#include "necklab/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "necklab/cache.hpp"
#include "necklab/geodesic.hpp"
#include "necklab/harmonic.hpp"
#include "necklab/neck.hpp"
#include "necklab/spectrum.hpp"
#include "necklab/weights.hpp"

namespace necklab {

namespace {
constexpr double kPi = std::numbers::pi;

// Winding and wrap scenarios solve in the equator circle S^1: there the
// winding class is protected and the map is the energy minimizer of its
// class, while in S^2 it is a saddle that plain descent walks away from.
bool solves_in_equator(Family f) {
  return f == Family::torus_winding || f == Family::theta_wrap;
}

DiscreteMap restrict_equator(const DiscreteMap& u3) {
  DiscreteMap u2 = make_map(u3.grid, make_target("sphere", 1));
  u2.values = u3.values.topRows(2);
  u2.fixed = u3.fixed;
  for (int k = 0; k < u2.grid.num_nodes(); ++k)
    u2.values.col(k) = u2.target->project(u2.values.col(k));
  return u2;
}

// cap circle of geodesic radius r around c, one point per theta node
Eigen::MatrixXd cap_circle(const TargetManifold& target, const Eigen::VectorXd& c, double r,
                           const CylinderGrid& g) {
  const Eigen::MatrixXd frame = tangent_frame(target, c);
  Eigen::MatrixXd row(target.ambient_dim(), g.n_theta);
  for (int j = 0; j < g.n_theta; ++j) {
    const double th = g.theta(j);
    const Eigen::VectorXd dir = std::cos(th) * frame.col(0) + std::sin(th) * frame.col(1);
    row.col(j) = target.geodesic_point(c, dir, r);
  }
  return row;
}

DiscreteMap neck_initial_map(const Scenario& sc, const CylinderGrid& g) {
  auto s2 = make_target(sc.target_name, sc.target_dim);
  DiscreteMap u = make_map(g, s2);
  const Eigen::VectorXd p = s2->project(sc.p_end);
  const Eigen::VectorXd q = s2->project(sc.q_end);
  const double d = s2->distance(p, q);
  const Eigen::VectorXd dir = s2->log_map(p, q).normalized();
  const double T = g.extent();
  const double kappa = d / T;
  const double decay = std::sqrt(std::max(1.0 - kappa * kappa, 0.25));
  const Eigen::MatrixXd fp = tangent_frame(*s2, p);
  const Eigen::MatrixXd fq = tangent_frame(*s2, q);
  const double r0 = sc.end_ripple;

  for (int i = 0; i < g.n_t; ++i) {
    const double t = g.t(i) - g.t_min;
    const Eigen::VectorXd arc = s2->geodesic_point(p, dir, kappa * t);
    const double a_lo = r0 * std::exp(-decay * t);
    const double a_hi = r0 * std::exp(-decay * (T - t));
    for (int j = 0; j < g.n_theta; ++j) {
      const double th = g.theta(j);
      Eigen::VectorXd v = arc;
      v += a_lo * (std::cos(th) * fp.col(0) + std::sin(th) * fp.col(1));
      v += a_hi * (std::cos(th) * fq.col(0) + std::sin(th) * fq.col(1));
      u.values.col(g.node(i, j)) = s2->project(v);
    }
  }
  impose_dirichlet_rows(u, cap_circle(*s2, p, r0, g), cap_circle(*s2, q, r0, g));
  return u;
}

// S^1-valued winding/wrap init in the equator plane
DiscreteMap equator_initial_map(const Scenario& sc, const CylinderGrid& g) {
  auto s1 = make_target("sphere", 1);
  DiscreteMap u = make_map(g, s1);
  const double alpha =
      sc.family == Family::torus_winding ? 2.0 * kPi * sc.winding / g.extent() : 0.0;
  for (int i = 0; i < g.n_t; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const double phase = sc.family == Family::torus_winding ? alpha * g.t(i) : g.theta(j);
      u.values.col(g.node(i, j)) = Eigen::Vector2d(std::cos(phase), std::sin(phase));
    }
  }
  if (sc.init_noise > 0.0) {
    const TangentField n = random_tangent_field(u, sc.init_noise, sc.seed);
    for (int k = 0; k < g.num_nodes(); ++k)
      u.values.col(k) = s1->project(u.values.col(k) + n.values.col(k));
  }
  return u;
}

}  // namespace

int IndexLedger::exit_code() const {
  if (!complete) return 2;
  for (const auto& s : steps)
    if (!s.converged) return 2;
  if (!verdict_upper_all || !verdict_lower_all) return 3;
  return 0;
}

bool verdict_upper(const StepRecord& s, const LimitSide& lim) {
  return s.extended_omega() <= lim.upper_bound();
}

bool verdict_lower(const StepRecord& s, const LimitSide& lim) {
  return s.ind_omega >= lim.lower_bound();
}

CollarParams scenario_collar(const Scenario& sc, const ScenarioStep& step) {
  const double t_total = step.T + 2.0 * kPi / sc.rho;
  const double l = 2.0 * kPi * kPi / t_total;
  return collar_params(l, sc.rho, sc.beta);
}

CylinderGrid scenario_grid(const Scenario& sc, const ScenarioStep& step) {
  if (sc.family == Family::dirichlet_neck)
    return make_cylinder_grid(0.0, step.T, step.n_t, step.n_theta);
  const double t_total = step.T + 2.0 * kPi / sc.rho;
  return make_torus_grid(t_total, step.n_t, step.n_theta);
}

DiscreteMap build_initial_map(const Scenario& sc, const ScenarioStep& step) {
  const CylinderGrid g = scenario_grid(sc, step);
  if (sc.family == Family::dirichlet_neck) return neck_initial_map(sc, g);
  return embed_equator(equator_initial_map(sc, g));
}

ScheduleSolve solve_schedule(const Scenario& sc, const std::string& cache_dir) {
  ScheduleSolve out;
  auto s2 = make_target(sc.target_name, sc.target_dim);
  const uint64_t key = scenario_hash(sc);

  SolveOptions sopts;
  sopts.tol = sc.solve_tol;
  sopts.max_iter = sc.max_iter;

  DiscreteMap prev_equator;
  DiscreteMap prev_neck;

  for (size_t si = 0; si < sc.steps.size(); ++si) {
    const ScenarioStep& step = sc.steps[si];
    const CylinderGrid g = scenario_grid(sc, step);

    DiscreteMap u;
    bool loaded = false;
    if (!cache_dir.empty()) {
      if (auto hit = cache_load(cache_dir, key, int(si), g, s2)) {
        u = std::move(*hit);
        loaded = true;
      }
    }

    if (loaded) {
      out.iterations.push_back(0);
      out.converged.push_back(true);
      out.energies.push_back(dirichlet_energy(u));
    } else if (solves_in_equator(sc.family)) {
      DiscreteMap init2 = (si == 0 || prev_equator.values.size() == 0)
                              ? equator_initial_map(sc, g)
                              : resample(prev_equator, g);
      auto [u2, rep] = solve_harmonic(std::move(init2), sopts);
      u = embed_equator(u2);
      out.iterations.push_back(rep.iterations);
      out.converged.push_back(rep.converged);
      out.energies.push_back(rep.energy);
    } else {
      DiscreteMap init = (si == 0 || prev_neck.values.size() == 0) ? neck_initial_map(sc, g)
                                                                   : resample(prev_neck, g);
      if (si > 0) {
        const Eigen::VectorXd pe = s2->project(sc.p_end);
        const Eigen::VectorXd qe = s2->project(sc.q_end);
        impose_dirichlet_rows(init, cap_circle(*s2, pe, sc.end_ripple, g),
                              cap_circle(*s2, qe, sc.end_ripple, g));
      }
      auto [usol, rep] = solve_harmonic(std::move(init), sopts);
      u = std::move(usol);
      out.iterations.push_back(rep.iterations);
      out.converged.push_back(rep.converged);
      out.energies.push_back(rep.energy);
    }
    out.cached.push_back(loaded);

    if (solves_in_equator(sc.family))
      prev_equator = restrict_equator(u);
    else
      prev_neck = u;

    if (!loaded && !cache_dir.empty() && out.converged.back())
      cache_store(cache_dir, key, int(si), u);
    out.maps.push_back(std::move(u));

    if (!out.converged.back()) {
      out.failed_step = int(si);
      break;
    }
  }
  return out;
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opts) {
  RunResult out;
  IndexLedger& led = out.ledger;
  led.scenario = sc;
  led.scenario_key = scenario_hash(sc);

  auto s2 = make_target(sc.target_name, sc.target_dim);
  const ScheduleSolve solves = solve_schedule(sc, opts.cache_dir);
  led.complete = solves.failed_step < 0;
  led.failed_step = solves.failed_step;

  for (size_t si = 0; si < solves.maps.size(); ++si) {
    const ScenarioStep& step = sc.steps[si];
    const CollarParams p = scenario_collar(sc, step);
    const CylinderGrid g = scenario_grid(sc, step);
    const DiscreteMap& u = solves.maps[si];

    StepRecord rec;
    rec.step = int(si);
    rec.T = step.T;
    rec.T_total = g.extent();
    rec.n_t = step.n_t;
    rec.n_theta = step.n_theta;
    rec.zero_tol = sc.zero_tol > 0.0 ? sc.zero_tol : 0.5 * g.h_t * g.h_t;
    rec.converged = solves.converged[si];
    rec.cached = solves.cached[si];
    rec.iterations = solves.iterations[si];
    rec.energy = solves.energies[si];
    rec.residual_sup = tension_residual(u).sup_norm();

    if (!rec.converged) {
      led.steps.push_back(rec);
      break;
    }

    const CollarLayout layout = sc.family == Family::dirichlet_neck ? collar_on_cylinder(p, g)
                                                                    : collar_on_torus(p);
    // weighted spectra: the paper operator's weight and the uniform cross-check
    {
      const JacobiSystem sys_u = assemble_jacobi(u, weight_uniform(g));
      const JacobiSystem sys_o = assemble_jacobi(u, weight_omega(g, layout));
      SpectrumOptions so;
      so.zero_tol = rec.zero_tol;
      so.mode = sys_u.dofs() <= 2600 ? EigenMode::full : EigenMode::lowest_k;
      so.k = 8;
      const SpectrumReport rep_u = solve_spectrum(sys_u, so);
      const SpectrumReport rep_o = solve_spectrum(sys_o, so);
      rec.ind_uniform = rep_u.index;
      rec.null_uniform = rep_u.nullity;
      rec.ind_omega = rep_o.index;
      rec.null_omega = rep_o.nullity;
      rec.sylvester_ok = (rep_u.index == rep_o.index && rep_u.nullity == rep_o.nullity);
      const size_t keep = std::min<size_t>(8, rep_u.eigenvalues.size());
      rec.low_eigenvalues.assign(rep_u.eigenvalues.begin(), rep_u.eigenvalues.begin() + keep);
    }

    rec.lambda = average_length_lambda(u);
    const DiscreteMap band = sc.family == Family::dirichlet_neck
                                 ? u
                                 : extract_band(u, layout.t_start, layout.t_end());
    const RescaledMap ru = rescale_map(band);
    const auto sup = sup_norm_bands(ru, {{sc.band_lo, sc.band_hi}});
    rec.sup_dtheta_band = sup[0].sup_dtheta;
    rec.sup_ds_band = sup[0].sup_ds;
    const auto jq = junction_quantization(u, layout, sc.sigma);
    rec.junction_l21_outer = jq.outer;
    rec.junction_l21_inner = jq.inner;
    rec.pointwise_ratio_max = pointwise_bound_check(u, layout, rec.lambda).max_ratio;
    rec.angular_ratio_max = angular_bound_check(u, layout).max_ratio;
    const GeodesicFit fit = fit_geodesic(ru, sc.band_lo, sc.band_hi);
    rec.fit_residual = fit.c1_residual;
    rec.fit_residual_raw = fit.c1_residual_raw;
    rec.fit_speed_s = fit.speed_s;

    if (opts.rayleigh_trials > 0 && si + 1 == solves.maps.size())
      rec.rayleigh_min = rayleigh_neck_test(u, layout, sc.sigma, JunctionSide::outer,
                                            opts.rayleigh_trials, opts.rayleigh_seed)
                             .min_ratio;

    if (!opts.quiet)
      std::cout << "[" << sc.name << "] step " << si << " T=" << step.T
                << " iters=" << rec.iterations << " E=" << rec.energy
                << " ind/null(omega)=" << rec.ind_omega << "/" << rec.null_omega << "\n";

    led.steps.push_back(rec);
    if (opts.keep_maps) out.maps.push_back(u);

    if (si + 1 == solves.maps.size() && led.complete) {
      // limit side: base-map counts plus the fitted segment's spectrum
      const int n = s2->intrinsic_dim();
      if (sc.family == Family::dirichlet_neck) {
        led.limit.u_ind = led.limit.u_null = 0;
        led.limit.u_ind_split = led.limit.u_null_split = 0;
        led.limit.u_convention =
            "collapsed boundary caps: constant maps with pinned boundary; the single- and "
            "two-component conventions both give (0, 0)";
      } else {
        led.limit.u_ind = 0;
        led.limit.u_null = n;
        led.limit.u_ind_split = 0;
        led.limit.u_null_split = n;
        led.limit.u_convention =
            "whole torus degenerates into the collar; the thick-part limit is the constant "
            "map, nullity = dim of constant tangent fields = target dimension";
      }
      const double scale = rec.T_total / band.grid.extent();
      led.limit.segment_length = fit.degenerate ? 0.0 : fit.speed_s * scale;
      if (led.limit.segment_length > 1e-6) {
        const GeodesicSegment seg =
            make_segment(fit.segment.start, fit.segment.tangent, led.limit.segment_length, s2);
        const SegmentSpectrum sp = segment_spectrum(seg, 8);
        led.limit.seg_ind = sp.index;
        led.limit.seg_null = sp.nullity;
        led.limit.seg_normal_ind = sp.normal_index;
        led.limit.seg_normal_null = sp.normal_nullity;
      }
    }
  }

  for (auto& s : led.steps) {
    s.verdict_upper = verdict_upper(s, led.limit);
    s.verdict_lower = verdict_lower(s, led.limit);
  }
  led.verdict_upper_all =
      led.complete && !led.steps.empty() &&
      std::all_of(led.steps.begin(), led.steps.end(),
                  [](const StepRecord& s) { return s.verdict_upper; });
  led.verdict_lower_all =
      led.complete && !led.steps.empty() &&
      std::all_of(led.steps.begin(), led.steps.end(),
                  [](const StepRecord& s) { return s.verdict_lower; });
  if (led.steps.empty()) {
    led.verdict_upper_all = led.verdict_lower_all = led.complete;
  }
  return out;
}

std::string ledger_to_json(const IndexLedger& led) {
  nlohmann::json j;
  j["scenario"] = canonical_scenario(led.scenario);
  char key[32];
  std::snprintf(key, sizeof key, "%016llx", static_cast<unsigned long long>(led.scenario_key));
  j["scenario_key"] = key;
  j["complete"] = led.complete;
  j["failed_step"] = led.failed_step;
  j["verdict_upper_all"] = led.verdict_upper_all;
  j["verdict_lower_all"] = led.verdict_lower_all;

  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : led.steps) {
    nlohmann::json e;
    e["step"] = s.step;
    e["T"] = s.T;
    e["T_total"] = s.T_total;
    e["n_t"] = s.n_t;
    e["n_theta"] = s.n_theta;
    e["converged"] = s.converged;
    e["cached"] = s.cached;
    e["iterations"] = s.iterations;
    e["energy"] = s.energy;
    e["residual_sup"] = s.residual_sup;
    e["zero_tol"] = s.zero_tol;
    e["lambda"] = s.lambda;
    e["ind_uniform"] = s.ind_uniform;
    e["null_uniform"] = s.null_uniform;
    e["ind_omega"] = s.ind_omega;
    e["null_omega"] = s.null_omega;
    e["sylvester_ok"] = s.sylvester_ok;
    e["low_eigenvalues"] = s.low_eigenvalues;
    e["junction_l21_outer"] = s.junction_l21_outer;
    e["junction_l21_inner"] = s.junction_l21_inner;
    e["sup_dtheta_band"] = s.sup_dtheta_band;
    e["sup_ds_band"] = s.sup_ds_band;
    e["fit_residual"] = s.fit_residual;
    e["fit_residual_raw"] = s.fit_residual_raw;
    e["fit_speed_s"] = s.fit_speed_s;
    e["pointwise_ratio_max"] = s.pointwise_ratio_max;
    e["angular_ratio_max"] = s.angular_ratio_max;
    if (std::isfinite(s.rayleigh_min)) e["rayleigh_min"] = s.rayleigh_min;
    e["verdict_upper"] = s.verdict_upper;
    e["verdict_lower"] = s.verdict_lower;
    steps.push_back(e);
  }
  j["steps"] = steps;

  j["limit"] = {{"u_ind", led.limit.u_ind},
                {"u_null", led.limit.u_null},
                {"u_ind_split", led.limit.u_ind_split},
                {"u_null_split", led.limit.u_null_split},
                {"u_convention", led.limit.u_convention},
                {"segment_length", led.limit.segment_length},
                {"seg_ind", led.limit.seg_ind},
                {"seg_null", led.limit.seg_null},
                {"seg_normal_ind", led.limit.seg_normal_ind},
                {"seg_normal_null", led.limit.seg_normal_null}};
  return j.dump(2);
}

IndexLedger ledger_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  IndexLedger led;
  led.scenario = parse_scenario(j.at("scenario").get<std::string>());
  led.scenario_key = std::stoull(j.at("scenario_key").get<std::string>(), nullptr, 16);
  led.complete = j.at("complete").get<bool>();
  led.failed_step = j.at("failed_step").get<int>();
  led.verdict_upper_all = j.at("verdict_upper_all").get<bool>();
  led.verdict_lower_all = j.at("verdict_lower_all").get<bool>();
  for (const auto& e : j.at("steps")) {
    StepRecord s;
    s.step = e.at("step").get<int>();
    s.T = e.at("T").get<double>();
    s.T_total = e.at("T_total").get<double>();
    s.n_t = e.at("n_t").get<int>();
    s.n_theta = e.at("n_theta").get<int>();
    s.converged = e.at("converged").get<bool>();
    s.cached = e.at("cached").get<bool>();
    s.iterations = e.at("iterations").get<long>();
    s.energy = e.at("energy").get<double>();
    s.residual_sup = e.at("residual_sup").get<double>();
    s.zero_tol = e.at("zero_tol").get<double>();
    s.lambda = e.at("lambda").get<double>();
    s.ind_uniform = e.at("ind_uniform").get<int>();
    s.null_uniform = e.at("null_uniform").get<int>();
    s.ind_omega = e.at("ind_omega").get<int>();
    s.null_omega = e.at("null_omega").get<int>();
    s.sylvester_ok = e.at("sylvester_ok").get<bool>();
    s.low_eigenvalues = e.at("low_eigenvalues").get<std::vector<double>>();
    s.junction_l21_outer = e.at("junction_l21_outer").get<double>();
    s.junction_l21_inner = e.at("junction_l21_inner").get<double>();
    s.sup_dtheta_band = e.at("sup_dtheta_band").get<double>();
    s.sup_ds_band = e.at("sup_ds_band").get<double>();
    s.fit_residual = e.at("fit_residual").get<double>();
    s.fit_residual_raw = e.at("fit_residual_raw").get<double>();
    s.fit_speed_s = e.at("fit_speed_s").get<double>();
    s.pointwise_ratio_max = e.at("pointwise_ratio_max").get<double>();
    s.angular_ratio_max = e.at("angular_ratio_max").get<double>();
    if (e.contains("rayleigh_min")) s.rayleigh_min = e.at("rayleigh_min").get<double>();
    s.verdict_upper = e.at("verdict_upper").get<bool>();
    s.verdict_lower = e.at("verdict_lower").get<bool>();
    led.steps.push_back(s);
  }
  const auto& lim = j.at("limit");
  led.limit.u_ind = lim.at("u_ind").get<int>();
  led.limit.u_null = lim.at("u_null").get<int>();
  led.limit.u_ind_split = lim.at("u_ind_split").get<int>();
  led.limit.u_null_split = lim.at("u_null_split").get<int>();
  led.limit.u_convention = lim.at("u_convention").get<std::string>();
  led.limit.segment_length = lim.at("segment_length").get<double>();
  led.limit.seg_ind = lim.at("seg_ind").get<int>();
  led.limit.seg_null = lim.at("seg_null").get<int>();
  led.limit.seg_normal_ind = lim.at("seg_normal_ind").get<int>();
  led.limit.seg_normal_null = lim.at("seg_normal_null").get<int>();
  return led;
}

}  // namespace necklab
