#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nadsthermo/covers.hpp"
#include "nadsthermo/nads.hpp"

namespace nadsthermo {

/// top: Bowen separation with S_n phi (sum over i = 0..n-1).
/// mis: pullback-entourage separation with phi_n (sum over i = 1..n).
enum class PressureMode { top, mis };

std::string to_string(PressureMode mode);
PressureMode parse_pressure_mode(const std::string& text);
SeparationMode separation_for(PressureMode mode);

double log_sum_exp(std::span<const double> values);

/// log sum_{x in members} exp(orbit sum of phi) for a fixed set.
double log_partition_on_set(const MapSequence& seq, const Potential& phi, std::span<const PointId> members,
                            std::size_t n, PressureMode mode);

/// log sum_{x in E} e^{S_n phi(x)} over the weighted-greedy maximal (n, eps)-separated set E.
double partition_sum_top(const MapSequence& seq, const Potential& phi, std::size_t n, double eps);
/// p(phi_n, E) over the weighted-greedy maximal (n, delta_r)_M-separated set E,
/// delta_r = {(x, y) : d(x, y) < r}.
double partition_sum_mis(const MapSequence& seq, const Potential& phi, std::size_t n, double r);

struct PressureSample {
  std::size_t n = 0;
  double scale = 0.0;
  double log_sum = 0.0;  // log of the partition sum
  double value = 0.0;    // log_sum / n
  std::size_t set_size = 0;
  /// max_x S_n phi(x) over the whole space (the first greedy pick).
  double max_sum = 0.0;
  /// log |spanning set at scale/2| + n max phi, when requested.
  std::optional<double> upper;
};

struct ScaleSummary {
  double scale = 0.0;
  /// Max of value over the tail of the schedule (finite limsup surrogate).
  double tail_max = 0.0;
  /// Least-squares slope of log_sum against n over the tail. For a sequence
  /// of period p only tail entries with n = n_last (mod p) are fitted.
  double growth_rate = 0.0;
  std::size_t fit_points = 0;
  /// Fit of value = intercept + slope / n over the tail.
  double fit_intercept = 0.0;
  double fit_slope = 0.0;
  double fit_r2 = 1.0;
  std::size_t tail_points = 0;
  /// max_sum / n at the largest n. Not below int phi dmu for any invariant mu.
  double orbit_floor = 0.0;
};

/// growth_floor is max(growth_rate, orbit_floor).
enum class Extrapolation { growth_rate, tail_max, growth_floor };

std::string to_string(Extrapolation e);

struct EstimateOptions {
  Extrapolation extrapolation = Extrapolation::growth_rate;
  /// Attach spanning-set upper brackets to every sample.
  bool spanning_bracket = false;
  /// Worker threads for the (n, scale) grid; 0 picks hardware concurrency.
  std::size_t threads = 1;
};

struct PressureEstimate {
  PressureMode mode = PressureMode::top;
  std::string potential_label;
  Extrapolation extrapolation = Extrapolation::growth_rate;
  std::vector<PressureSample> samples;  // scale-major, schedule order within a scale
  std::vector<ScaleSummary> per_scale;  // in the order of the scale list
  /// Max over scales of the per-scale estimate selected by `extrapolation`.
  double extrapolated = 0.0;
  std::vector<std::string> warnings;
};

/// Number of schedule entries used as the tail: the last ceil(len/2), at least
/// two when the schedule has two or more entries.
std::size_t tail_length(std::size_t schedule_length);

PressureEstimate pressure_estimate(const MapSequence& seq, const Potential& phi, const std::vector<std::size_t>& schedule,
                                   const std::vector<double>& scales, PressureMode mode,
                                   const EstimateOptions& options = {});

PressureEstimate entropy_estimate(const MapSequence& seq, const std::vector<std::size_t>& schedule,
                                  const std::vector<double>& scales, PressureMode mode,
                                  const EstimateOptions& options = {});

/// Pressure values for a base family plus the derived potentials the axiom
/// checks need: phi + c for every base phi and constant c, and
/// t phi + (1 - t) psi for every listed pair and mixing weight t.
struct AxiomTable {
  std::vector<Potential> potentials;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> constants;
  std::vector<double> mix_weights;
  std::map<std::string, double> gamma;
};

using PressureFunctional = std::function<double(const Potential&)>;

/// Evaluates `gamma` on every potential the axiom checks need. A zero
/// potential is added when absent.
AxiomTable build_axiom_table(const SampledSpace& space, std::vector<Potential> potentials,
                             std::vector<std::pair<std::size_t, std::size_t>> pairs, std::vector<double> constants,
                             std::vector<double> mix_weights, const PressureFunctional& gamma);

struct AxiomTolerances {
  double monotone = 0.0;
  double translation = 0.0;
  double convexity = 0.0;
  double lipschitz = 0.0;
  double sandwich = 0.0;

  static AxiomTolerances uniform(double tol) { return {tol, tol, tol, tol, tol}; }
};

struct AxiomItem {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  /// Largest violation seen (<= 0 means every check held with room to spare).
  double worst = -std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
};

struct AxiomReport {
  std::vector<AxiomItem> items;
  bool all_pass() const;
  const AxiomItem& item(const std::string& name) const;
};

/// Increasing (on pairs with phi <= psi pointwise), translation, convexity,
/// 1-Lipschitz in sup norm, and h + min phi <= gamma(phi) <= h + max phi.
/// Throws when a derived potential is missing from the table.
AxiomReport axioms_check(const AxiomTable& table, const AxiomTolerances& tol);

}  // namespace nadsthermo
