#include "nadsthermo/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nadsthermo/format.hpp"
#include "nadsthermo/parallel.hpp"

namespace nadsthermo {

std::string to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::zero: return "zero";
    case EntryKind::constant: return "constant";
    case EntryKind::base: return "base";
    case EntryKind::scaled: return "scaled";
    case EntryKind::coboundary: return "coboundary";
    case EntryKind::midpoint: return "midpoint";
  }
  return "unknown";
}

std::vector<double> scaling_factors(double max_scaling) {
  if (!(max_scaling >= 1.0)) throw std::invalid_argument("scaling bound must be at least 1");
  std::vector<double> out;
  for (double m = 1.0; m <= max_scaling; m *= 2.0) {
    out.push_back(m);
    out.push_back(-m);
  }
  return out;
}

void PotentialDictionary::add(DictionaryEntry entry) {
  if (entry.potential.size() == 0) throw std::invalid_argument("dictionary entry has no values");
  if (points_ == 0) points_ = entry.potential.size();
  if (entry.potential.size() != points_) throw std::invalid_argument("dictionary entries live on different spaces");
  if (index_.count(entry.label())) throw std::invalid_argument("duplicate dictionary label: " + entry.label());
  index_.emplace(entry.label(), entries_.size());
  entries_.push_back(std::move(entry));
}

const DictionaryEntry* PotentialDictionary::find(const std::string& label) const {
  const auto it = index_.find(label);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const DictionaryEntry& PotentialDictionary::at(const std::string& label) const {
  const auto* e = find(label);
  if (!e) throw std::out_of_range("no dictionary entry labelled " + label);
  return *e;
}

std::vector<Potential> PotentialDictionary::bases() const {
  std::vector<Potential> out;
  for (const auto& e : entries_)
    if (e.kind == EntryKind::base) out.push_back(e.potential);
  return out;
}

PotentialDictionary PotentialDictionary::zero_only(const SampledSpace& space) {
  PotentialDictionary d;
  d.add({EntryKind::zero, zero_potential(space), "", 0.0, 0});
  return d;
}

PotentialDictionary PotentialDictionary::closure(const MapSequence& seq, const std::vector<Potential>& bases,
                                                 const ClosureParams& params) {
  if (params.steps == 0) throw std::invalid_argument("closure needs at least one step");
  const SampledSpace& space = seq.space();
  PotentialDictionary d = zero_only(space);
  d.closure_ = params;
  std::vector<Potential> used;
  for (const Potential& phi : bases) {
    if (phi.size() != space.size()) throw std::invalid_argument("base potential does not match the space");
    if (phi.label == "zero" || d.find(phi.label)) continue;
    d.add({EntryKind::base, phi, phi.label, 1.0, 0});
    used.push_back(phi);
  }
  if (params.constants) {
    for (double c : {1.0, -1.0}) d.add({EntryKind::constant, constant_potential(space, c), "", c, 0});
  }
  const std::vector<double> factors = scaling_factors(params.max_scaling);
  if (params.scalings) {
    for (const Potential& phi : used)
      for (double m : factors)
        if (m != 1.0) d.add({EntryKind::scaled, scaled(phi, m), phi.label, m, 0});
  }
  if (params.coboundaries) {
    std::vector<StepMap> seen;
    for (std::size_t n = 1; n <= params.steps; ++n) {
      StepMap map = seq.step_map(n);
      if (std::find(seen.begin(), seen.end(), map) != seen.end()) continue;
      for (const Potential& psi : used) {
        const Potential cb = coboundary(psi, map, "cb(" + psi.label + "," + std::to_string(n) + ")");
        for (double m : factors) {
          Potential w = m == 1.0 ? cb : scaled(cb, m);
          d.add({EntryKind::coboundary, std::move(w), psi.label, m, n});
        }
      }
      seen.push_back(std::move(map));
    }
  }
  if (params.midpoints) {
    for (std::size_t i = 0; i < used.size(); ++i)
      for (std::size_t j = i + 1; j < used.size(); ++j)
        d.add({EntryKind::midpoint, mixed(used[i], used[j], 0.5), used[i].label, 0.5, 0});
  }
  return d;
}

double GammaTable::value(const std::string& label) const {
  const auto* e = dictionary.find(label);
  if (!e) throw std::out_of_range("no dictionary entry labelled " + label);
  return values[static_cast<std::size_t>(e - dictionary.entries().data())];
}

EstimateOptions duality_estimate_options() {
  EstimateOptions options;
  options.extrapolation = Extrapolation::growth_floor;
  return options;
}

GammaTable build_gamma_table(const MapSequence& seq, PotentialDictionary dictionary,
                             const std::vector<std::size_t>& schedule, const std::vector<double>& scales,
                             PressureMode mode, const EstimateOptions& options) {
  GammaTable table{std::move(dictionary), {}, {seq.label(), mode, options.extrapolation, schedule, scales}};
  const auto& entries = table.dictionary.entries();
  table.values.assign(entries.size(), 0.0);
  EstimateOptions inner = options;
  inner.threads = 1;
  inner.spanning_bracket = false;
  if (!schedule.empty()) seq.orbits(schedule.back() + 1);
  parallel_for(entries.size(), options.threads, [&](std::size_t i) {
    table.values[i] = pressure_estimate(seq, entries[i].potential, schedule, scales, mode, inner).extrapolated;
  });
  return table;
}

EntropyValue entropy_dict(const GammaTable& gamma, const Measure& mu) {
  const auto& entries = gamma.dictionary.entries();
  if (entries.empty()) throw std::invalid_argument("empty gamma table");
  EntropyValue best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double v = gamma.values[i] - integrate(entries[i].potential, mu);
    if (v < best.value) best = {v, entries[i].label()};
  }
  return best;
}

VariationalCheck variational_check(const GammaTable& gamma, const std::vector<Measure>& candidates,
                                   const std::string& phi_label) {
  if (candidates.empty()) throw std::invalid_argument("variational check needs candidate measures");
  const DictionaryEntry& entry = gamma.dictionary.at(phi_label);
  VariationalCheck out;
  out.phi_label = phi_label;
  out.gamma_phi = gamma.value(phi_label);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double h = entropy_dict(gamma, candidates[k]).value;
    const double integral = integrate(entry.potential, candidates[k]);
    if (!(h <= out.gamma_phi - integral)) out.weak_duality = false;
    const double score = h + integral;
    out.candidates.push_back(candidates[k].label());
    out.scores.push_back(score);
    if (score > best) {
      best = score;
      out.argmax = k;
    }
  }
  out.gap = out.gamma_phi - best;
  return out;
}

std::optional<Witness> non_invariance_witness(const GammaTable& gamma, const Measure& mu, std::size_t steps,
                                              double max_scaling, double tol) {
  if (steps == 0 || max_scaling < 1.0) throw std::invalid_argument("witness search needs N >= 1 and M >= 1");
  std::optional<Witness> best;
  const auto& entries = gamma.dictionary.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.kind != EntryKind::coboundary || e.step > steps || std::abs(e.factor) > max_scaling) continue;
    const double integral = integrate(e.potential, mu);
    const double margin = integral - gamma.values[i];
    if (margin > tol && (!best || margin > best->margin)) {
      best = Witness{e.label(), e.base, e.step, e.factor, integral, gamma.values[i], margin};
    }
  }
  return best;
}

std::optional<double> star_entropy_dict(const std::vector<Measure>& candidates, const std::vector<double>& h_values,
                                        const Measure& mu, double eta) {
  if (candidates.size() != h_values.size()) throw std::invalid_argument("one entropy value per candidate needed");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  std::optional<double> best;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (candidates[k].size() != mu.size()) throw std::invalid_argument("measure is not on the candidates' space");
    if (total_variation(candidates[k], mu) <= eta && (!best || h_values[k] > *best)) best = h_values[k];
  }
  return best;
}

bool DualityReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const ReportItem& i) { return i.skipped || i.pass; });
}

const ReportItem& DualityReport::item(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return i;
  throw std::out_of_range("no report item " + name);
}

namespace {

ReportItem item_a(const MapSequence& seq, const GammaTable& gamma, const std::vector<Measure>& candidates,
                  const ReportOptions& opt) {
  ReportItem item{"a", false, true, {}, nlohmann::json::object()};
  if (candidates.empty()) {
    item.skipped = true;
    item.reason = "no candidate measures";
    return item;
  }
  std::vector<Potential> test = gamma.dictionary.bases();
  if (test.empty()) test.push_back(gamma.dictionary.entries().front().potential);
  std::vector<std::string> asserted = opt.a_labels;
  if (asserted.empty()) {
    asserted.push_back("zero");
    for (const auto& e : gamma.dictionary.entries())
      if (e.kind == EntryKind::base) asserted.push_back(e.label());
  }
  std::vector<double> defects(candidates.size(), -1.0);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : gamma.dictionary.entries()) {
    const VariationalCheck vc = variational_check(gamma, candidates, e.label());
    double& defect = defects[vc.argmax];
    if (defect < 0.0) defect = invariance_defect(seq, candidates[vc.argmax], test, opt.steps);
    nlohmann::json row = {{"phi", e.label()},
                          {"argmax", vc.candidates[vc.argmax]},
                          {"gap", vc.gap},
                          {"defect", defect},
                          {"weak_duality", vc.weak_duality}};
    if (std::find(asserted.begin(), asserted.end(), e.label()) != asserted.end()) {
      const bool ok = defect <= opt.defect_threshold;
      item.pass = item.pass && ok;
      row["pass"] = ok;
    }
    rows.push_back(std::move(row));
  }
  item.detail = {{"asserted", asserted}, {"rows", std::move(rows)}};
  return item;
}

ReportItem item_b(const GammaTable& gamma, const std::vector<Measure>& invariant_set,
                  const std::vector<Measure>& non_invariant, const ReportOptions& opt) {
  ReportItem item{"b", false, true, {}, nlohmann::json::object()};
  item.reason =
      "entropy_dict is an upper bound: a value below zero refutes invariance, a nonnegative value on an invariant "
      "measure is a necessary check only";
  auto& inv = item.detail["invariant"] = nlohmann::json::array();
  for (const Measure& mu : invariant_set) {
    const EntropyValue h = entropy_dict(gamma, mu);
    const bool ok = h.value >= -opt.invariant_tolerance;
    item.pass = item.pass && ok;
    inv.push_back({{"measure", mu.label()}, {"entropy_dict", h.value}, {"argmin", h.argmin}, {"pass", ok}});
  }
  auto& non = item.detail["non_invariant"] = nlohmann::json::array();
  for (const Measure& mu : non_invariant) {
    const EntropyValue h = entropy_dict(gamma, mu);
    const auto w = non_invariance_witness(gamma, mu, opt.steps, opt.max_scaling);
    const bool ok = h.value <= opt.drive_bound && w.has_value();
    item.pass = item.pass && ok;
    nlohmann::json row = {{"measure", mu.label()}, {"entropy_dict", h.value}, {"argmin", h.argmin}, {"pass", ok}};
    row["witness"] = w ? nlohmann::json{{"label", w->label}, {"integral", w->integral}, {"gamma", w->gamma}}
                       : nlohmann::json(nullptr);
    non.push_back(std::move(row));
  }
  item.detail["tolerance"] = opt.invariant_tolerance;
  item.detail["drive_bound"] = opt.drive_bound;
  return item;
}

ReportItem item_c(const GammaTable& gamma, const std::vector<Measure>& invariant_set,
                  const std::optional<std::vector<double>>& h_assign, const ReportOptions& opt) {
  ReportItem item{"c", false, true, {}, nlohmann::json::object()};
  std::vector<double> H;
  for (const Measure& mu : invariant_set) H.push_back(entropy_dict(gamma, mu).value);
  const std::vector<double> h = h_assign.value_or(H);
  if (h.size() != invariant_set.size()) throw std::invalid_argument("one assigned entropy per invariant measure needed");
  auto& rows = item.detail["measures"] = nlohmann::json::array();
  auto& violations = item.detail["violations"] = nlohmann::json::array();
  bool order_h_H_star = true, order_h_star_H = true;
  for (std::size_t k = 0; k < invariant_set.size(); ++k) {
    const double star = *star_entropy_dict(invariant_set, h, invariant_set[k], opt.eta);
    const std::string& label = invariant_set[k].label();
    if (h[k] < -opt.invariant_tolerance) violations.push_back(label + ": h < 0");
    if (h[k] > star) violations.push_back(label + ": h > h*");
    const bool first = h[k] <= H[k] && H[k] <= star;
    const bool second = h[k] <= star && star <= H[k];
    order_h_H_star = order_h_H_star && first;
    order_h_star_H = order_h_star_H && second;
    rows.push_back({{"measure", label}, {"h", h[k]}, {"entropy_dict", H[k]}, {"star_entropy", star}});
  }
  item.pass = violations.empty();
  item.detail["eta"] = opt.eta;
  item.detail["observed_h_le_H_le_hstar"] = order_h_H_star;
  item.detail["observed_h_le_hstar_le_H"] = order_h_star_H;
  item.reason = "both orderings of h* and the entropy map are reported; neither is asserted";
  return item;
}

ReportItem item_d(const GammaTable& gamma, const std::vector<Measure>& invariant_set, const ReportOptions& opt) {
  ReportItem item{"d", false, true, {}, nlohmann::json::object()};
  std::vector<double> H;
  for (const Measure& mu : invariant_set) H.push_back(entropy_dict(gamma, mu).value);
  auto& rows = item.detail["gaps"] = nlohmann::json::array();
  const auto& entries = gamma.dictionary.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < invariant_set.size(); ++k) {
      const double v = H[k] + integrate(entries[i].potential, invariant_set[k]);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    const double gap = std::abs(best - gamma.values[i]);
    const bool asserted =
        std::find(opt.d_labels.begin(), opt.d_labels.end(), entries[i].label()) != opt.d_labels.end();
    nlohmann::json row = {{"phi", entries[i].label()}, {"gap", gap}, {"argmax", invariant_set[arg].label()}};
    if (asserted) {
      row["pass"] = gap <= opt.d_tolerance;
      item.pass = item.pass && gap <= opt.d_tolerance;
    }
    rows.push_back(std::move(row));
  }
  item.detail["tolerance"] = opt.d_tolerance;
  item.detail["asserted"] = opt.d_labels;
  return item;
}

}  // namespace

DualityReport duality_report(const MapSequence& seq, const GammaTable& gamma, const std::vector<Measure>& invariant_set,
                             const std::vector<Measure>& non_invariant, const std::vector<Measure>& candidates,
                             const std::optional<std::vector<double>>& h_assign, const ReportOptions& options) {
  DualityReport report;
  report.invariant_set_empty = invariant_set.empty();
  report.items.push_back(item_a(seq, gamma, candidates, options));
  report.items.push_back(item_b(gamma, invariant_set, non_invariant, options));
  if (invariant_set.empty()) {
    const std::string reason = "invariant set is empty";
    report.items.push_back({"c", true, true, reason, nullptr});
    report.items.push_back({"d", true, true, reason, nullptr});
  } else {
    report.items.push_back(item_c(gamma, invariant_set, h_assign, options));
    report.items.push_back(item_d(gamma, invariant_set, options));
  }
  return report;
}

nlohmann::json to_json(const GammaProvenance& p) {
  return {{"system", p.system},
          {"mode", to_string(p.mode)},
          {"extrapolation", to_string(p.extrapolation)},
          {"schedule", p.schedule},
          {"scales", p.scales}};
}

nlohmann::json to_json(const GammaTable& gamma) {
  nlohmann::json entries = nlohmann::json::array();
  const auto& dict = gamma.dictionary.entries();
  for (std::size_t i = 0; i < dict.size(); ++i) {
    nlohmann::json e = {{"label", dict[i].label()}, {"kind", to_string(dict[i].kind)}, {"value", gamma.values[i]}};
    if (!dict[i].base.empty()) e["base"] = dict[i].base;
    if (dict[i].kind == EntryKind::scaled || dict[i].kind == EntryKind::coboundary) e["factor"] = dict[i].factor;
    if (dict[i].step) e["step"] = dict[i].step;
    entries.push_back(std::move(e));
  }
  nlohmann::json out = {{"provenance", to_json(gamma.provenance)}, {"entries", std::move(entries)}};
  if (const auto& c = gamma.dictionary.closure_meta()) {
    out["closure"] = {{"steps", c->steps},         {"max_scaling", c->max_scaling}, {"constants", c->constants},
                      {"scalings", c->scalings},   {"coboundaries", c->coboundaries}, {"midpoints", c->midpoints}};
  }
  return out;
}

nlohmann::json to_json(const DualityReport& report, const GammaTable& gamma) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& i : report.items) {
    nlohmann::json j = {{"item", i.name}, {"skipped", i.skipped}, {"pass", i.pass}};
    if (!i.reason.empty()) j["reason"] = i.reason;
    if (!i.detail.is_null()) j["detail"] = i.detail;
    items.push_back(std::move(j));
  }
  return {{"provenance", to_json(gamma.provenance)},
          {"invariant_set_empty", report.invariant_set_empty},
          {"all_pass", report.all_pass()},
          {"upper_semicontinuity", "theoretical property, not tested from a finite dictionary"},
          {"items", std::move(items)}};
}

}  // namespace nadsthermo
