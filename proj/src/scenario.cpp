#include "necklab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace necklab {

const char* family_name(Family f) {
  switch (f) {
    case Family::torus_winding: return "torus_winding";
    case Family::dirichlet_neck: return "dirichlet_neck";
    case Family::theta_wrap: return "theta_wrap";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "torus_winding") return Family::torus_winding;
  if (s == "dirichlet_neck") return Family::dirichlet_neck;
  if (s == "theta_wrap") return Family::theta_wrap;
  throw std::invalid_argument("scenario: unknown family '" + s + "'");
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

void validate(const Scenario& sc) {
  if (sc.version != 1) throw std::invalid_argument("scenario: unsupported version");
  if (sc.steps.empty()) return;  // an empty schedule is allowed (headers-only reports)
  double prev = 0.0;
  for (const auto& st : sc.steps) {
    if (!(st.T > prev)) throw std::invalid_argument("scenario: schedule must be strictly increasing in T");
    if (st.n_t < 8 || st.n_theta < 8) throw std::invalid_argument("scenario: grid too coarse");
    prev = st.T;
  }
  if (!(sc.sigma > 0.0 && sc.sigma <= 0.45)) throw std::invalid_argument("scenario: sigma outside (0, 0.45]");
  if (!(sc.band_lo < sc.band_hi && sc.band_lo > 0.0 && sc.band_hi < 1.0))
    throw std::invalid_argument("scenario: band must sit inside (0, 1)");
  if (sc.family == Family::dirichlet_neck) {
    if (std::abs(sc.p_end.norm() - 1.0) > 1e-9 || std::abs(sc.q_end.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("scenario: neck endpoints must be unit vectors");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  sc.rho = std::numbers::pi;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string eq;
    ls >> eq;
    if (eq != "=") throw std::invalid_argument("scenario: expected 'key = value' at line " + std::to_string(lineno));

    auto want = [&](auto& v) {
      if (!(ls >> v)) throw std::invalid_argument("scenario: bad value for '" + key + "'");
    };
    if (key == "version") want(sc.version);
    else if (key == "name") want(sc.name);
    else if (key == "family") { std::string f; want(f); sc.family = family_from_name(f); }
    else if (key == "target") { want(sc.target_name); want(sc.target_dim); }
    else if (key == "winding") want(sc.winding);
    else if (key == "p") { want(sc.p_end.x()); want(sc.p_end.y()); want(sc.p_end.z()); }
    else if (key == "q") { want(sc.q_end.x()); want(sc.q_end.y()); want(sc.q_end.z()); }
    else if (key == "ripple") want(sc.end_ripple);
    else if (key == "step") { ScenarioStep st; want(st.T); want(st.n_t); want(st.n_theta); sc.steps.push_back(st); }
    else if (key == "rho") want(sc.rho);
    else if (key == "beta") want(sc.beta);
    else if (key == "sigma") want(sc.sigma);
    else if (key == "zero_tol") {
      std::string v; want(v);
      sc.zero_tol = (v == "auto") ? 0.0 : std::stod(v);
    }
    else if (key == "solve_tol") want(sc.solve_tol);
    else if (key == "max_iter") want(sc.max_iter);
    else if (key == "seed") want(sc.seed);
    else if (key == "noise") want(sc.init_noise);
    else if (key == "band") { want(sc.band_lo); want(sc.band_hi); }
    else throw std::invalid_argument("scenario: unknown key '" + key + "'");
  }
  validate(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string canonical_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "version = " << sc.version << '\n';
  out << "name = " << sc.name << '\n';
  out << "family = " << family_name(sc.family) << '\n';
  out << "target = " << sc.target_name << ' ' << sc.target_dim << '\n';
  out << "winding = " << sc.winding << '\n';
  out << "p = " << format_g17(sc.p_end.x()) << ' ' << format_g17(sc.p_end.y()) << ' '
      << format_g17(sc.p_end.z()) << '\n';
  out << "q = " << format_g17(sc.q_end.x()) << ' ' << format_g17(sc.q_end.y()) << ' '
      << format_g17(sc.q_end.z()) << '\n';
  out << "ripple = " << format_g17(sc.end_ripple) << '\n';
  for (const auto& st : sc.steps)
    out << "step = " << format_g17(st.T) << ' ' << st.n_t << ' ' << st.n_theta << '\n';
  out << "rho = " << format_g17(sc.rho) << '\n';
  out << "beta = " << format_g17(sc.beta) << '\n';
  out << "sigma = " << format_g17(sc.sigma) << '\n';
  out << "zero_tol = " << (sc.zero_tol == 0.0 ? std::string("auto") : format_g17(sc.zero_tol)) << '\n';
  out << "solve_tol = " << format_g17(sc.solve_tol) << '\n';
  out << "max_iter = " << sc.max_iter << '\n';
  out << "seed = " << sc.seed << '\n';
  out << "noise = " << format_g17(sc.init_noise) << '\n';
  out << "band = " << format_g17(sc.band_lo) << ' ' << format_g17(sc.band_hi) << '\n';
  return out.str();
}

uint64_t scenario_hash(const Scenario& sc) { return fnv1a64(canonical_scenario(sc)); }

}  // namespace necklab
