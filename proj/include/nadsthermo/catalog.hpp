#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nadsthermo/nads.hpp"
#include "nadsthermo/potential.hpp"
#include "nadsthermo/space.hpp"

namespace nadsthermo {

/// Which sampled space to build: a grid size or symbolic parameters.
struct SpaceSpec {
  SpaceKind kind = SpaceKind::circle;
  std::size_t size = 1025;
  SymbolicParams symbolic{};
  std::string custom_path;
};

SampledSpace build_space(const SpaceSpec& spec);

struct CatalogInfo {
  std::string key;
  std::string spaces;
  std::string description;
};

/// Built-in system keys with the spaces they act on.
std::vector<CatalogInfo> system_catalog();
std::vector<CatalogInfo> potential_catalog();

/// Default space for a catalog key, e.g. a symbolic space for "shift:m".
SpaceSpec default_space_for(const std::string& key);

/// One self-map from a non-periodic catalog key, snapped onto the grid.
/// `snap_error` receives the largest snapping displacement.
StepMap make_step_map(const std::string& key, const SampledSpace& space, double* snap_error = nullptr);

/// Catalog keys: identity, doubling, tripling, multiply:k, rotation:a, tent,
/// logistic:r, shift:m, northsouth:p,q, periodic:[k1,k2,...].
MapSequence make_system(const std::string& key, std::shared_ptr<const SampledSpace> space);

/// Reads {"points", "metric", "maps": [[...], ...], "label"} and returns the
/// cyclic system it describes.
MapSequence load_custom_system(const std::string& path);

/// Potential keys: zero, coord, const:c, cos:k, sin:k, first-symbol:[a,b,...],
/// lipschitz-random:seed,L.
Potential make_potential(const std::string& key, const SampledSpace& space);

/// Splits the inside of periodic:[...] into entries, keeping numeric
/// parameters (northsouth:p,q) attached to their key.
std::vector<std::string> split_periodic_entries(const std::string& inner);

}  // namespace nadsthermo
