#include "nadsthermo/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nadsthermo/format.hpp"
#include "nadsthermo/parallel.hpp"

namespace nadsthermo {

std::string to_string(PressureMode mode) { return mode == PressureMode::top ? "top" : "mis"; }

PressureMode parse_pressure_mode(const std::string& text) {
  if (text == "top") return PressureMode::top;
  if (text == "mis") return PressureMode::mis;
  throw std::invalid_argument("unknown pressure mode '" + text + "' (expected top or mis)");
}

SeparationMode separation_for(PressureMode mode) {
  return mode == PressureMode::top ? SeparationMode::bowen : SeparationMode::misiurewicz;
}

std::string to_string(Extrapolation e) {
  switch (e) {
    case Extrapolation::growth_rate: return "growth_rate";
    case Extrapolation::tail_max: return "tail_max";
    case Extrapolation::growth_floor: return "growth_floor";
  }
  return "growth_rate";
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

double log_partition_on_set(const MapSequence& seq, const Potential& phi, std::span<const PointId> members,
                            std::size_t n, PressureMode mode) {
  const StepWindow w = step_window(separation_for(mode), n);
  const auto orbits = seq.orbits(w.last);
  std::vector<double> sums;
  sums.reserve(members.size());
  for (PointId x : members) {
    double s = 0.0;
    for (std::size_t i = w.first; i <= w.last; ++i) s += phi(orbits->at(i, x));
    sums.push_back(s);
  }
  return log_sum_exp(sums);
}

namespace {

double weighted_partition(const MapSequence& seq, const Potential& phi, std::size_t n, double scale,
                          PressureMode mode, std::size_t* set_size, double* max_sum = nullptr) {
  const SeparatedSet set = max_separated_set(seq, n, scale, separation_for(mode), &phi);
  if (set_size) *set_size = set.members.size();
  if (max_sum) {
    const StepWindow w = step_window(separation_for(mode), n);
    const auto orbits = seq.orbits(w.last);
    double s = 0.0;
    for (std::size_t i = w.first; i <= w.last; ++i) s += phi(orbits->at(i, set.members.front()));
    *max_sum = s;
  }
  return log_partition_on_set(seq, phi, set.members, n, mode);
}

ScaleSummary summarize_scale(double scale, std::span<const PressureSample> row, std::size_t period) {
  ScaleSummary s;
  s.scale = scale;
  const std::size_t tail = tail_length(row.size());
  const auto first = row.size() - tail;
  s.tail_points = tail;
  s.orbit_floor = row.back().max_sum / static_cast<double>(row.back().n);
  s.tail_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < row.size(); ++i) s.tail_max = std::max(s.tail_max, row[i].value);

  if (period == 0) period = 1;
  if (tail < 2) {
    s.fit_points = tail;
    s.growth_rate = row.back().value;
    s.fit_intercept = row.back().value;
    s.fit_slope = 0.0;
    s.fit_r2 = 1.0;
    return s;
  }

  // Periodic sequences are sampled stroboscopically: only n congruent to the
  // last n modulo the period, so the partition sums see whole periods.
  std::vector<std::size_t> fit;
  const std::size_t phase = row.back().n % period;
  for (std::size_t i = first; i < row.size(); ++i)
    if (row[i].n % period == phase) fit.push_back(i);
  if (fit.size() < 2) {
    fit.clear();
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i].n % period == phase) fit.push_back(i);
    if (fit.size() > tail) fit.erase(fit.begin(), fit.end() - static_cast<std::ptrdiff_t>(tail));
  }
  if (fit.size() < 2) {
    fit.clear();
    for (std::size_t i = first; i < row.size(); ++i) fit.push_back(i);
  }

  // Slope of log_sum against n, with log_sum taken relative to the first fitted
  // sample so equal sums give an exact zero.
  double n_mean = 0.0;
  for (std::size_t i : fit) n_mean += static_cast<double>(row[i].n);
  n_mean /= static_cast<double>(fit.size());
  const double base = row[fit.front()].log_sum;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i : fit) {
    const double dx = static_cast<double>(row[i].n) - n_mean;
    sxy += dx * (row[i].log_sum - base);
    sxx += dx * dx;
  }
  s.growth_rate = sxx > 0.0 ? sxy / sxx : row.back().value;
  s.fit_points = fit.size();

  // value = intercept + slope / n.
  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = first; i < row.size(); ++i) {
    x_mean += 1.0 / static_cast<double>(row[i].n);
    y_mean += row[i].value;
  }
  x_mean /= static_cast<double>(tail);
  y_mean /= static_cast<double>(tail);
  double cxy = 0.0, cxx = 0.0, cyy = 0.0;
  for (std::size_t i = first; i < row.size(); ++i) {
    const double dx = 1.0 / static_cast<double>(row[i].n) - x_mean;
    const double dy = row[i].value - y_mean;
    cxy += dx * dy;
    cxx += dx * dx;
    cyy += dy * dy;
  }
  s.fit_slope = cxx > 0.0 ? cxy / cxx : 0.0;
  s.fit_intercept = y_mean - s.fit_slope * x_mean;
  s.fit_r2 = (cxx > 0.0 && cyy > 0.0) ? (cxy * cxy) / (cxx * cyy) : 1.0;
  return s;
}

}  // namespace

double partition_sum_top(const MapSequence& seq, const Potential& phi, std::size_t n, double eps) {
  return weighted_partition(seq, phi, n, eps, PressureMode::top, nullptr);
}

double partition_sum_mis(const MapSequence& seq, const Potential& phi, std::size_t n, double r) {
  return weighted_partition(seq, phi, n, r, PressureMode::mis, nullptr);
}

std::size_t tail_length(std::size_t schedule_length) {
  if (schedule_length == 0) return 0;
  const std::size_t half = (schedule_length + 1) / 2;
  return std::max(half, std::min<std::size_t>(2, schedule_length));
}

PressureEstimate pressure_estimate(const MapSequence& seq, const Potential& phi, const std::vector<std::size_t>& schedule,
                                   const std::vector<double>& scales, PressureMode mode,
                                   const EstimateOptions& options) {
  if (schedule.empty()) throw std::invalid_argument("n-schedule must be nonempty");
  if (scales.empty()) throw std::invalid_argument("scale list must be nonempty");
  if (schedule.front() == 0) throw std::invalid_argument("n-schedule entries must be at least 1");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw std::invalid_argument("n-schedule must be strictly ascending");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw std::invalid_argument("scales must be positive");
    if (i > 0 && scales[i] >= scales[i - 1]) throw std::invalid_argument("scales must be strictly descending");
  }
  if (phi.size() != seq.space().size()) throw std::invalid_argument("potential does not match the space");

  PressureEstimate est;
  est.mode = mode;
  est.potential_label = phi.label;
  est.extrapolation = options.extrapolation;

  // Warm the shared orbit cache once so workers only read it.
  seq.orbits(schedule.back() + 1);

  const std::size_t cells = schedule.size() * scales.size();
  est.samples.resize(cells);
  const double phi_max = phi.max();
  parallel_for(cells, options.threads, [&](std::size_t cell) {
    const std::size_t si = cell / schedule.size();
    const std::size_t ni = cell % schedule.size();
    PressureSample& sample = est.samples[cell];
    sample.n = schedule[ni];
    sample.scale = scales[si];
    sample.log_sum = weighted_partition(seq, phi, sample.n, sample.scale, mode, &sample.set_size, &sample.max_sum);
    sample.value = sample.log_sum / static_cast<double>(sample.n);
    if (options.spanning_bracket) {
      const auto cover = min_spanning_set(seq, sample.n, sample.scale / 2.0, separation_for(mode));
      sample.upper = std::log(static_cast<double>(cover.size())) + static_cast<double>(sample.n) * phi_max;
    }
  });

  est.extrapolated = -std::numeric_limits<double>::infinity();
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const std::span<const PressureSample> row(est.samples.data() + si * schedule.size(), schedule.size());
    ScaleSummary summary = summarize_scale(scales[si], row, seq.period().value_or(1));
    double chosen = summary.growth_rate;
    if (options.extrapolation == Extrapolation::tail_max) chosen = summary.tail_max;
    if (options.extrapolation == Extrapolation::growth_floor) chosen = std::max(summary.growth_rate, summary.orbit_floor);
    est.extrapolated = std::max(est.extrapolated, chosen);
    est.per_scale.push_back(summary);
  }

  const double floor_scale = 3.0 * seq.space().mesh();
  if (scales.back() < floor_scale) {
    est.warnings.push_back("smallest scale " + format_number(scales.back()) + " is below 3x grid mesh (" +
                           format_number(floor_scale) + "); values there reflect the grid, not the dynamics");
  }
  if (seq.snap_error() > 0.0) {
    est.warnings.push_back("step maps were snapped to the grid; largest displacement " +
                           format_number(seq.snap_error()));
  }
  return est;
}

PressureEstimate entropy_estimate(const MapSequence& seq, const std::vector<std::size_t>& schedule,
                                  const std::vector<double>& scales, PressureMode mode,
                                  const EstimateOptions& options) {
  return pressure_estimate(seq, zero_potential(seq.space()), schedule, scales, mode, options);
}

AxiomTable build_axiom_table(const SampledSpace& space, std::vector<Potential> potentials,
                             std::vector<std::pair<std::size_t, std::size_t>> pairs, std::vector<double> constants,
                             std::vector<double> mix_weights, const PressureFunctional& gamma) {
  AxiomTable table;
  const bool has_zero =
      std::any_of(potentials.begin(), potentials.end(), [](const Potential& p) { return p.label == "zero"; });
  if (!has_zero) potentials.push_back(zero_potential(space));
  for (const auto& [a, b] : pairs) {
    if (a >= potentials.size() || b >= potentials.size()) throw std::invalid_argument("axiom pair index out of range");
  }
  table.potentials = std::move(potentials);
  table.pairs = std::move(pairs);
  table.constants = std::move(constants);
  table.mix_weights = std::move(mix_weights);

  auto record = [&](const Potential& p) {
    if (!table.gamma.contains(p.label)) table.gamma[p.label] = gamma(p);
  };
  for (const auto& p : table.potentials) {
    record(p);
    for (double c : table.constants) record(shifted(p, c));
  }
  for (const auto& [a, b] : table.pairs)
    for (double t : table.mix_weights) record(mixed(table.potentials[a], table.potentials[b], t));
  return table;
}

bool AxiomReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const AxiomItem& i) { return i.pass; });
}

const AxiomItem& AxiomReport::item(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return i;
  throw std::out_of_range("no axiom item named " + name);
}

AxiomReport axioms_check(const AxiomTable& table, const AxiomTolerances& tol) {
  auto lookup = [&](const std::string& label) {
    const auto it = table.gamma.find(label);
    if (it == table.gamma.end()) throw std::invalid_argument("pressure table is missing '" + label + "'");
    return it->second;
  };
  auto note = [](AxiomItem& item, double violation) {
    ++item.checks;
    item.worst = std::max(item.worst, violation);
  };
  auto sup_dist = [](const Potential& a, const Potential& b) {
    double d = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) d = std::max(d, std::abs(a.values[p] - b.values[p]));
    return d;
  };
  auto dominated = [](const Potential& a, const Potential& b) {
    for (std::size_t p = 0; p < a.size(); ++p)
      if (a.values[p] > b.values[p]) return false;
    return true;
  };

  AxiomItem monotone{"monotone", true, 0, -std::numeric_limits<double>::infinity(), tol.monotone};
  AxiomItem translation{"translation", true, 0, -std::numeric_limits<double>::infinity(), tol.translation};
  AxiomItem convexity{"convexity", true, 0, -std::numeric_limits<double>::infinity(), tol.convexity};
  AxiomItem lipschitz{"lipschitz", true, 0, -std::numeric_limits<double>::infinity(), tol.lipschitz};
  AxiomItem sandwich{"sandwich", true, 0, -std::numeric_limits<double>::infinity(), tol.sandwich};

  const double h = lookup("zero");
  auto sandwich_check = [&](const Potential& p) {
    const double g = lookup(p.label);
    note(sandwich, std::max(h + p.min() - g, g - h - p.max()));
  };

  for (const auto& p : table.potentials) {
    const double g = lookup(p.label);
    sandwich_check(p);
    for (double c : table.constants) {
      const Potential shifted_p = shifted(p, c);
      note(translation, std::abs(lookup(shifted_p.label) - g - c));
      sandwich_check(shifted_p);
      if (c >= 0.0) note(monotone, g - lookup(shifted_p.label));
      else note(monotone, lookup(shifted_p.label) - g);
    }
  }
  for (const auto& [a, b] : table.pairs) {
    const Potential& phi = table.potentials[a];
    const Potential& psi = table.potentials[b];
    const double ga = lookup(phi.label);
    const double gb = lookup(psi.label);
    if (dominated(phi, psi)) note(monotone, ga - gb);
    if (dominated(psi, phi)) note(monotone, gb - ga);
    note(lipschitz, std::abs(ga - gb) - sup_dist(phi, psi));
    for (double t : table.mix_weights) {
      const Potential mix = mixed(phi, psi, t);
      note(convexity, lookup(mix.label) - (t * ga + (1.0 - t) * gb));
      sandwich_check(mix);
    }
  }
  const Potential* zero = nullptr;
  for (const auto& p : table.potentials)
    if (p.label == "zero") zero = &p;
  for (const auto& p : table.potentials)
    if (zero && &p != zero) note(lipschitz, std::abs(lookup(p.label) - h) - sup_dist(p, *zero));

  AxiomReport report;
  for (AxiomItem* item : {&monotone, &translation, &convexity, &lipschitz, &sandwich}) {
    item->pass = item->checks == 0 || item->worst <= item->tolerance;
    report.items.push_back(*item);
  }
  return report;
}

}  // namespace nadsthermo
