#include "necklab/cache.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "necklab/scenario.hpp"

namespace necklab {

std::string cache_path(const std::string& dir, uint64_t scenario_key, int step) {
  char name[64];
  std::snprintf(name, sizeof name, "map_%016" PRIx64 "_s%03d.txt", scenario_key, step);
  return (std::filesystem::path(dir) / name).string();
}

void cache_store(const std::string& dir, uint64_t scenario_key, int step, const DiscreteMap& u) {
  std::filesystem::create_directories(dir);
  const CylinderGrid& g = u.grid;
  std::ostringstream body;
  body << "grid " << format_g17(g.t_min) << ' ' << format_g17(g.t_max) << ' ' << g.n_t << ' '
       << g.n_theta << ' ' << (g.t_periodic ? 1 : 0) << '\n';
  body << "target " << u.target->name() << ' ' << u.target->intrinsic_dim() << '\n';
  body << "fixed";
  if (u.fixed.empty()) {
    body << " none\n";
  } else {
    for (uint8_t f : u.fixed) body << ' ' << int(f);
    body << '\n';
  }
  body << "values " << u.values.cols() << ' ' << u.values.rows() << '\n';
  for (int k = 0; k < u.values.cols(); ++k) {
    for (int c = 0; c < u.values.rows(); ++c) {
      if (c) body << ' ';
      body << format_g17(u.values(c, k));
    }
    body << '\n';
  }
  const std::string payload = body.str();

  std::ofstream out(cache_path(dir, scenario_key, step));
  if (!out) throw std::runtime_error("cache_store: cannot write " + cache_path(dir, scenario_key, step));
  out << "necklab-map 1\n" << payload;
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016" PRIx64, fnv1a64(payload));
  out << "checksum " << sum << '\n';
}

std::optional<DiscreteMap> cache_load(const std::string& dir, uint64_t scenario_key, int step,
                                      const CylinderGrid& expected_grid,
                                      std::shared_ptr<const TargetManifold> target) {
  std::ifstream in(cache_path(dir, scenario_key, step));
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header) || header != "necklab-map 1") return std::nullopt;

  std::ostringstream payload;
  std::string line, checksum_line;
  while (std::getline(in, line)) {
    if (line.rfind("checksum ", 0) == 0) {
      checksum_line = line.substr(9);
      break;
    }
    payload << line << '\n';
  }
  if (checksum_line.empty()) return std::nullopt;
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016" PRIx64, fnv1a64(payload.str()));
  if (checksum_line != sum) return std::nullopt;

  std::istringstream body(payload.str());
  std::string tok;
  CylinderGrid g{};
  int periodic = 0;
  body >> tok;
  if (tok != "grid") return std::nullopt;
  body >> g.t_min >> g.t_max >> g.n_t >> g.n_theta >> periodic;
  std::string tname;
  int tdim = 0;
  body >> tok >> tname >> tdim;
  if (tok != "target" || tname != target->name() || tdim != target->intrinsic_dim())
    return std::nullopt;

  if (g.n_t != expected_grid.n_t || g.n_theta != expected_grid.n_theta ||
      periodic != (expected_grid.t_periodic ? 1 : 0) ||
      std::abs(g.t_min - expected_grid.t_min) > 1e-12 ||
      std::abs(g.t_max - expected_grid.t_max) > 1e-12)
    return std::nullopt;

  DiscreteMap u = make_map(expected_grid, std::move(target));
  body >> tok;
  if (tok != "fixed") return std::nullopt;
  body >> tok;
  if (tok != "none") {
    u.fixed.resize(expected_grid.num_nodes());
    u.fixed[0] = uint8_t(std::stoi(tok));
    for (int k = 1; k < expected_grid.num_nodes(); ++k) {
      int f = 0;
      if (!(body >> f)) return std::nullopt;
      u.fixed[k] = uint8_t(f);
    }
  }
  long cols = 0, rows = 0;
  body >> tok >> cols >> rows;
  if (tok != "values" || cols != u.values.cols() || rows != u.values.rows()) return std::nullopt;
  for (int k = 0; k < cols; ++k)
    for (int c = 0; c < rows; ++c)
      if (!(body >> u.values(c, k))) return std::nullopt;
  return u;
}

}  // namespace necklab
