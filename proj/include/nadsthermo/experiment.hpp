#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nadsthermo/catalog.hpp"
#include "nadsthermo/duality.hpp"

namespace nadsthermo {

struct DualityConfig {
  std::size_t steps = 1;
  double max_scaling = 64.0;
  std::vector<std::string> bases;
  /// uniform, invariant, dirac:k, dirac@x, orbit:k,n
  std::vector<std::string> candidates = {"uniform", "invariant"};
  double eta = 0.1;
  std::vector<std::string> d_labels = {"zero"};
  Extrapolation extrapolation = Extrapolation::growth_floor;
};

struct ExperimentConfig {
  std::string system;
  std::optional<SpaceSpec> space;
  std::vector<std::string> potentials = {"zero"};
  std::vector<std::size_t> schedule;
  std::vector<double> scales;
  /// top, mis or both.
  std::string mode = "top";
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  Extrapolation extrapolation = Extrapolation::growth_rate;
  std::size_t threads = 1;
  std::optional<DualityConfig> duality;
};

/// Parses and validates a config document; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

std::vector<PressureMode> modes_of(const std::string& mode);

/// Potential keys may be lipschitz-random:L, which takes the config seed.
Potential resolve_potential(const std::string& key, const SampledSpace& space, std::uint64_t seed);

/// Builds the system named by the config together with its space.
MapSequence resolve_system(const ExperimentConfig& config);

/// Candidate measure from a key; "invariant" is handled by the caller.
Measure resolve_measure(const std::string& key, const MapSequence& seq);

/// File name -> content, kept in memory until every artifact is ready.
using Artifacts = std::map<std::string, std::string>;

Artifacts run_estimate(const ExperimentConfig& config);
Artifacts run_duality(const ExperimentConfig& config);

/// Writes every artifact into `dir`; on failure the files written so far are
/// removed and the error is rethrown.
void write_artifacts(const std::string& dir, const Artifacts& artifacts);

std::string csv_field(const std::string& text);

}  // namespace nadsthermo
