#pragma once

// Content-addressed solved-map cache: plain-text tables keyed by scenario
// hash and step index, checksummed so corrupt entries fall through to a
// recompute.

#include <optional>
#include <string>

#include "necklab/map.hpp"

namespace necklab {

std::string cache_path(const std::string& dir, uint64_t scenario_key, int step);

void cache_store(const std::string& dir, uint64_t scenario_key, int step, const DiscreteMap& u);

// nullopt when missing, malformed, checksummed wrong, or incompatible with
// the expected grid/target.
std::optional<DiscreteMap> cache_load(const std::string& dir, uint64_t scenario_key, int step,
                                      const CylinderGrid& expected_grid,
                                      std::shared_ptr<const TargetManifold> target);

}  // namespace necklab
