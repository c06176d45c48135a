// necklab: harmonic maps on degenerating cylinders and tori, weighted Jacobi
// spectra, and neck diagnostics.
//
// Exit codes: 0 success, 2 solver non-convergence, 3 index-inequality
// violation in a sweep.

#include <cinttypes>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "necklab/cache.hpp"
#include "necklab/geodesic.hpp"
#include "necklab/harmonic.hpp"
#include "necklab/ledger.hpp"
#include "necklab/neck.hpp"
#include "necklab/report.hpp"
#include "necklab/spectrum.hpp"
#include "necklab/weights.hpp"

namespace {

using namespace necklab;

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  uint64_t seed = 0;
  bool seed_set = false;
  std::string grid;  // "NxM" override
  double zero_tol = -1.0;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool scenario_required = true) {
  auto* opt = cmd->add_option("--scenario", a.scenario_path, "scenario file");
  if (scenario_required) opt->required();
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--seed", a.seed, "override the scenario rng seed")
      ->each([&a](const std::string&) { a.seed_set = true; });
  cmd->add_option("--grid", a.grid, "override all step grids, e.g. 128x16");
  cmd->add_option("--zero-tol", a.zero_tol, "override the zero classification tolerance");
}

Scenario load_with_overrides(const CommonArgs& a) {
  Scenario sc = load_scenario(a.scenario_path);
  if (a.seed_set) sc.seed = a.seed;
  if (a.zero_tol >= 0.0) sc.zero_tol = a.zero_tol;
  if (!a.grid.empty()) {
    const auto x = a.grid.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--grid expects NxM");
    const int nt = std::stoi(a.grid.substr(0, x));
    const int nth = std::stoi(a.grid.substr(x + 1));
    for (auto& st : sc.steps) {
      st.n_t = nt;
      st.n_theta = nth;
    }
  }
  return sc;
}

std::string cache_dir_for(const CommonArgs& a) {
  return (std::filesystem::path(a.out_dir) / "cache").string();
}

int cmd_solve(const CommonArgs& a) {
  const Scenario sc = load_with_overrides(a);
  const ScheduleSolve s = solve_schedule(sc, cache_dir_for(a));
  for (size_t i = 0; i < s.maps.size(); ++i) {
    std::cout << "step " << i << ": T=" << format_g17(sc.steps[i].T)
              << " grid=" << sc.steps[i].n_t << "x" << sc.steps[i].n_theta
              << (s.cached[i] ? " [cached]" : "") << " iters=" << s.iterations[i]
              << " energy=" << format_g17(s.energies[i])
              << (s.converged[i] ? "" : "  NOT CONVERGED") << "\n";
  }
  if (s.failed_step >= 0) {
    std::cerr << "solver failed to converge at step " << s.failed_step << "\n";
    return 2;
  }
  return 0;
}

int cmd_spectrum(const CommonArgs& a, const std::string& weight_name) {
  const Scenario sc = load_with_overrides(a);
  const ScheduleSolve s = solve_schedule(sc, cache_dir_for(a));
  if (s.failed_step >= 0) return 2;
  std::filesystem::create_directories(a.out_dir);
  for (size_t i = 0; i < s.maps.size(); ++i) {
    const CollarParams p = scenario_collar(sc, sc.steps[i]);
    const CylinderGrid g = scenario_grid(sc, sc.steps[i]);
    const CollarLayout layout =
        sc.family == Family::dirichlet_neck ? collar_on_cylinder(p, g) : collar_on_torus(p);
    WeightField w;
    if (weight_name == "uniform")
      w = weight_uniform(g);
    else if (weight_name == "omega")
      w = weight_omega(g, layout);
    else if (weight_name == "frak")
      w = weight_frak(g, layout, sc.sigma, /*extend_off_collar=*/true);
    else
      throw CLI::ValidationError("--weight must be uniform|omega|frak");

    const JacobiSystem sys = assemble_jacobi(s.maps[i], w);
    SpectrumOptions so;
    so.zero_tol = sc.zero_tol > 0.0 ? sc.zero_tol : 0.5 * g.h_t * g.h_t;
    so.mode = sys.dofs() <= 2600 ? EigenMode::full : EigenMode::lowest_k;
    const SpectrumReport rep = solve_spectrum(sys, so);

    char key[64];
    std::snprintf(key, sizeof key, "%016" PRIx64 "/%zu", scenario_hash(sc), i);
    const std::string path = (std::filesystem::path(a.out_dir) /
                              (sc.name + "_spectrum_s" + std::to_string(i) + ".json"))
                                 .string();
    std::ofstream out(path);
    out << spectrum_to_json(rep, key) << "\n";
    std::cout << "step " << i << ": index=" << rep.index << " nullity=" << rep.nullity
              << " extended=" << rep.extended() << "  -> " << path << "\n";
  }
  return 0;
}

int cmd_geodesic(double length, int modes, const std::string& out_dir) {
  auto sphere = make_target("sphere", 2);
  const Eigen::Vector3d p(1, 0, 0), v(0, 1, 0);
  const GeodesicSegment seg = make_segment(p, v, length, sphere);
  const SegmentSpectrum sp = segment_spectrum(seg, modes);
  const ConjugatePoints cp = conjugate_points(seg);
  std::cout << "L=" << format_g17(length) << " normal (index, nullity) = (" << sp.normal_index
            << ", " << sp.normal_nullity << ")  combined (index, nullity, extended) = ("
            << sp.index << ", " << sp.nullity << ", " << sp.extended() << ")\n";
  std::cout << "conjugate points: " << cp.count << (cp.endpoint_zero ? " (+ endpoint zero)" : "")
            << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string path =
        (std::filesystem::path(out_dir) / ("segment_L" + format_g17(length) + ".json")).string();
    std::ofstream out(path);
    out << segment_spectrum_to_json(sp, length) << "\n";
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_neckstats(const CommonArgs& a) {
  const Scenario sc = load_with_overrides(a);
  RunOptions ro;
  ro.cache_dir = cache_dir_for(a);
  ro.quiet = false;
  const RunResult run = run_scenario(sc, ro);
  std::filesystem::create_directories(a.out_dir);
  const std::string path =
      (std::filesystem::path(a.out_dir) / (sc.name + "_neckstats.csv")).string();
  std::ofstream out(path);
  out << ledger_csv(run.ledger);
  std::cout << "wrote " << path << "\n";
  return run.ledger.exit_code() == 2 ? 2 : 0;
}

int cmd_sweep(const CommonArgs& a, int rayleigh_trials) {
  const Scenario sc = load_with_overrides(a);
  RunOptions ro;
  ro.cache_dir = cache_dir_for(a);
  ro.quiet = false;
  ro.rayleigh_trials = rayleigh_trials;
  ro.rayleigh_seed = sc.seed + 1;
  const RunResult run = run_scenario(sc, ro);
  for (const auto& path : emit_report(run.ledger, a.out_dir)) std::cout << "wrote " << path << "\n";
  const int code = run.ledger.exit_code();
  if (code == 2) std::cerr << "sweep incomplete: solver failure\n";
  if (code == 3) std::cerr << "index inequality violated\n";
  std::cout << "verdict_upper_all=" << run.ledger.verdict_upper_all
            << " verdict_lower_all=" << run.ledger.verdict_lower_all << "\n";
  return code;
}

int cmd_report(const std::string& ledger_path, const std::string& out_dir) {
  std::ifstream in(ledger_path);
  if (!in) {
    std::cerr << "cannot open " << ledger_path << "\n";
    return 1;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const IndexLedger led = ledger_from_json(buf.str());
  for (const auto& path : emit_report(led, out_dir)) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic-map degeneration laboratory"};
  app.require_subcommand(1);

  CommonArgs solve_args, spectrum_args, neck_args, sweep_args;
  std::string weight_name = "omega";
  int rayleigh_trials = 0;
  double geo_length = 0.0;
  int geo_modes = 8;
  std::string geo_out, report_ledger, report_out = "out";

  auto* c_solve = app.add_subcommand("solve", "run the continuation solves of a scenario");
  add_common(c_solve, solve_args);

  auto* c_spec = app.add_subcommand("spectrum", "weighted Jacobi spectra per step");
  add_common(c_spec, spectrum_args);
  c_spec->add_option("--weight", weight_name, "uniform|omega|frak");

  auto* c_geo = app.add_subcommand("geodesic", "segment index/nullity and conjugate points");
  c_geo->add_option("--length", geo_length, "arclength of the segment")->required();
  c_geo->add_option("--modes", geo_modes, "eigenvalues to report");
  c_geo->add_option("--out", geo_out, "output directory");

  auto* c_neck = app.add_subcommand("neckstats", "neck diagnostics per step");
  add_common(c_neck, neck_args);

  auto* c_sweep = app.add_subcommand("sweep", "full degeneration sweep with index ledger");
  add_common(c_sweep, sweep_args);
  c_sweep->add_option("--rayleigh-trials", rayleigh_trials,
                      "junction Rayleigh trials on the final step");

  auto* c_report = app.add_subcommand("report", "re-emit reports from a stored ledger");
  c_report->add_option("--ledger", report_ledger, "ledger json file")->required();
  c_report->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_solve->parsed()) return cmd_solve(solve_args);
    if (c_spec->parsed()) return cmd_spectrum(spectrum_args, weight_name);
    if (c_geo->parsed()) return cmd_geodesic(geo_length, geo_modes, geo_out);
    if (c_neck->parsed()) return cmd_neckstats(neck_args);
    if (c_sweep->parsed()) return cmd_sweep(sweep_args, rayleigh_trials);
    if (c_report->parsed()) return cmd_report(report_ledger, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
