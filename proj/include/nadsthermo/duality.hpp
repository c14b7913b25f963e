#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nadsthermo/measures.hpp"
#include "nadsthermo/pressure.hpp"

namespace nadsthermo {

enum class EntryKind { zero, constant, base, scaled, coboundary, midpoint };

std::string to_string(EntryKind kind);

struct DictionaryEntry {
  EntryKind kind = EntryKind::base;
  Potential potential;
  /// Base potential this entry derives from (empty for zero and constants).
  std::string base;
  /// Scaling factor m (1 for unscaled entries, the constant for constants).
  double factor = 1.0;
  /// Step n of the coboundary m (psi o f_n - psi); 0 otherwise.
  std::size_t step = 0;

  const std::string& label() const { return potential.label; }
};

/// Which derived families were generated.
struct ClosureParams {
  /// Coboundaries use f_n for n <= steps.
  std::size_t steps = 1;
  /// Scalings +-1, +-2, +-4, ... up to +-max_scaling.
  double max_scaling = 64.0;
  bool constants = true;
  bool scalings = true;
  bool coboundaries = true;
  bool midpoints = true;
};

/// Finite family of potentials standing in for all continuous functions.
class PotentialDictionary {
 public:
  /// Zero potential plus the listed bases and their closure under constants
  /// (+-1), scalings, scaled coboundaries and pairwise midpoints of the bases.
  /// Coboundaries for steps repeating an earlier step map are omitted.
  static PotentialDictionary closure(const MapSequence& seq, const std::vector<Potential>& bases,
                                     const ClosureParams& params);
  /// Just the zero potential.
  static PotentialDictionary zero_only(const SampledSpace& space);

  /// Throws on duplicate labels or a size mismatch.
  void add(DictionaryEntry entry);

  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const DictionaryEntry* find(const std::string& label) const;
  const DictionaryEntry& at(const std::string& label) const;
  const std::optional<ClosureParams>& closure_meta() const { return closure_; }
  /// Base potentials (entries of kind base) in insertion order.
  std::vector<Potential> bases() const;

 private:
  std::vector<DictionaryEntry> entries_;
  std::map<std::string, std::size_t> index_;
  std::optional<ClosureParams> closure_;
  std::size_t points_ = 0;
};

std::vector<double> scaling_factors(double max_scaling);

struct GammaProvenance {
  std::string system;
  PressureMode mode = PressureMode::top;
  Extrapolation extrapolation = Extrapolation::growth_rate;
  std::vector<std::size_t> schedule;
  std::vector<double> scales;
};

/// Estimated pressure for every dictionary entry, all under one provenance.
struct GammaTable {
  PotentialDictionary dictionary;
  std::vector<double> values;  // aligned with dictionary entries
  GammaProvenance provenance;

  double value(const std::string& label) const;
};

/// growth_floor extrapolation, so gamma(phi) >= int phi dmu for every
/// invariant mu.
EstimateOptions duality_estimate_options();

/// Runs pressure_estimate for every entry; entries are spread over `threads`.
GammaTable build_gamma_table(const MapSequence& seq, PotentialDictionary dictionary,
                             const std::vector<std::size_t>& schedule, const std::vector<double>& scales,
                             PressureMode mode, const EstimateOptions& options = duality_estimate_options());

struct EntropyValue {
  double value = 0.0;
  /// Dictionary entry attaining the minimum.
  std::string argmin;
};

/// min over the dictionary of gamma(phi) - int phi dmu. An upper bound for the
/// entropy map, never above gamma(0).
EntropyValue entropy_dict(const GammaTable& gamma, const Measure& mu);

struct VariationalCheck {
  std::string phi_label;
  double gamma_phi = 0.0;
  std::vector<std::string> candidates;
  std::vector<double> scores;  // entropy_dict(mu) + int phi dmu
  std::size_t argmax = 0;
  /// gamma(phi) - max score; nonnegative up to rounding.
  double gap = 0.0;
  /// Every candidate satisfied entropy_dict(mu) <= gamma(phi) - int phi dmu.
  bool weak_duality = true;
};

VariationalCheck variational_check(const GammaTable& gamma, const std::vector<Measure>& candidates,
                                   const std::string& phi_label);

struct Witness {
  std::string label;
  std::string base;
  std::size_t step = 0;
  double factor = 0.0;
  double integral = 0.0;
  double gamma = 0.0;
  double margin = 0.0;  // integral - gamma
};

/// Coboundary entry w = m (psi o f_n - psi), |m| <= max_scaling, n <= steps,
/// with int w dmu > gamma(w) + tol and the largest margin; none if no entry
/// qualifies.
std::optional<Witness> non_invariance_witness(const GammaTable& gamma, const Measure& mu, std::size_t steps,
                                              double max_scaling, double tol = 1e-9);

/// max of h_values over candidates within total variation eta of mu; nullopt
/// when no candidate is that close.
std::optional<double> star_entropy_dict(const std::vector<Measure>& candidates, const std::vector<double>& h_values,
                                        const Measure& mu, double eta);

struct ReportOptions {
  /// Variational argmax must have a defect at most this.
  double defect_threshold = 1e-9;
  /// entropy_dict >= -tol on invariant measures.
  double invariant_tolerance = 0.05;
  /// Non-invariant measures must be driven to at most this.
  double drive_bound = -1.0;
  double eta = 0.1;
  /// Item (d) gap bound, checked on `d_labels`.
  double d_tolerance = 0.15;
  std::vector<std::string> d_labels = {"zero"};
  /// Item (a) is reported for every entry and asserted on these labels; zero
  /// and the bases when empty.
  std::vector<std::string> a_labels;
  std::size_t steps = 1;
  double max_scaling = 64.0;
};

struct ReportItem {
  std::string name;
  bool skipped = false;
  bool pass = true;
  std::string reason;
  nlohmann::json detail;
};

struct DualityReport {
  std::vector<ReportItem> items;
  bool invariant_set_empty = false;
  bool all_pass() const;
  const ReportItem& item(const std::string& name) const;
};

/// Items (a) to (d) of the invariant-measure variational principle, checked
/// against the table. `h_assign` defaults to entropy_dict on the invariant set.
DualityReport duality_report(const MapSequence& seq, const GammaTable& gamma, const std::vector<Measure>& invariant_set,
                             const std::vector<Measure>& non_invariant, const std::vector<Measure>& candidates,
                             const std::optional<std::vector<double>>& h_assign, const ReportOptions& options = {});

nlohmann::json to_json(const GammaProvenance& p);
nlohmann::json to_json(const GammaTable& gamma);
nlohmann::json to_json(const DualityReport& report, const GammaTable& gamma);

}  // namespace nadsthermo
