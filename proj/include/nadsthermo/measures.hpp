#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nadsthermo/nads.hpp"
#include "nadsthermo/potential.hpp"

namespace nadsthermo {

/// Probability weights over the points of a sampled space.
class Measure {
 public:
  /// Validates nonnegativity and unit mass (within 1e-12).
  Measure(std::vector<double> weights, std::string label);

  static Measure uniform(std::size_t points, std::string label = "uniform");
  static Measure dirac(std::size_t points, PointId at, std::string label = {});
  /// (1/n) sum_{i<n} delta_{F_i x}.
  static Measure empirical(const MapSequence& seq, PointId x, std::size_t n);

  const std::vector<double>& weights() const { return weights_; }
  double operator[](PointId p) const { return weights_[p]; }
  std::size_t size() const { return weights_.size(); }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  std::vector<double> weights_;
  std::string label_;
};

double integrate(const Potential& phi, const Measure& mu);

/// Image measure under the step map f_step.
Measure pushforward(const MapSequence& seq, std::size_t step, const Measure& mu);

double total_variation(const Measure& a, const Measure& b);

struct DefectRow {
  std::size_t n = 0;
  std::string psi_label;
  double defect = 0.0;
};

/// |int psi o f_n dmu - int psi dmu| for every n <= max_step and every psi.
std::vector<DefectRow> invariance_defect_table(const MapSequence& seq, const Measure& mu,
                                               std::span<const Potential> dictionary, std::size_t max_step);

/// Max over the table. Zero certifies invariance relative to (dictionary, max_step) only.
double invariance_defect(const MapSequence& seq, const Measure& mu, std::span<const Potential> dictionary,
                         std::size_t max_step);

/// sum_n ||T_n w - w||_1 over the distinct step maps f_1..f_N.
double invariance_residual(std::span<const StepMap> maps, std::span<const double> weights);

struct InvariantSearch {
  bool feasible = false;
  /// Feasible measure, or the residual minimizer when infeasible.
  Measure measure;
  /// Attained minimum of sum_n ||T_n w - w||_1 (0 when feasible).
  double residual = 0.0;
  /// "cycle-classes", "lp" or "projected-subgradient".
  std::string method;
  std::size_t maps = 0;
};

struct InvariantSearchOptions {
  double tolerance = 1e-9;
  /// Exact linear program for the residual minimum when points * maps stays
  /// at or below this; projected subgradient beyond.
  std::size_t lp_row_limit = 640;
  std::size_t subgradient_iterations = 4000;
};

/// Looks for w >= 0, sum w = 1 with T_n w = w for every n <= max_step.
/// Feasibility is decided exactly from the cycle structure of the tabulated
/// maps; when infeasible, the certificate carries the minimum residual.
InvariantSearch find_common_invariant(const MapSequence& seq, std::size_t max_step,
                                      const InvariantSearchOptions& options = {});

/// Distinct step maps among f_1..f_N, in order of first appearance.
std::vector<StepMap> distinct_step_maps(const MapSequence& seq, std::size_t max_step);

/// Exact LP minimum of sum_n ||T_n w - w||_1 over the simplex, with minimizer.
std::pair<double, std::vector<double>> min_invariance_residual_lp(std::span<const StepMap> maps);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

nlohmann::json to_json(const Measure& mu);
Measure measure_from_json(const nlohmann::json& doc);

}  // namespace nadsthermo
