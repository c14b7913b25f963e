#include "nadsthermo/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nadsthermo/format.hpp"
#include "nadsthermo/lp.hpp"

namespace nadsthermo {

Measure::Measure(std::vector<double> weights, std::string label) : weights_(std::move(weights)), label_(std::move(label)) {
  if (weights_.empty()) throw std::invalid_argument("measure needs at least one point");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("measure weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("measure weights sum to " + format_number(total) + ", not 1");
  }
}

Measure Measure::uniform(std::size_t points, std::string label) {
  if (points == 0) throw std::invalid_argument("measure needs at least one point");
  return Measure(std::vector<double>(points, 1.0 / static_cast<double>(points)), std::move(label));
}

Measure Measure::dirac(std::size_t points, PointId at, std::string label) {
  if (at >= points) throw std::out_of_range("dirac point is outside the space");
  std::vector<double> w(points, 0.0);
  w[at] = 1.0;
  if (label.empty()) label = "dirac:" + std::to_string(at);
  return Measure(std::move(w), std::move(label));
}

Measure Measure::empirical(const MapSequence& seq, PointId x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("empirical measure needs n >= 1");
  const OrbitTable orbit = composition_orbit(seq, x, n - 1);
  std::vector<double> w(seq.space().size(), 0.0);
  const double unit = 1.0 / static_cast<double>(n);
  for (PointId p : orbit.entries) w[p] += unit;
  // Renormalize away the rounding of repeated additions.
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return Measure(std::move(w), "orbit:" + std::to_string(x) + "," + std::to_string(n));
}

double integrate(const Potential& phi, const Measure& mu) {
  if (phi.size() != mu.size()) throw std::invalid_argument("potential and measure live on different spaces");
  double sum = 0.0;
  for (std::size_t p = 0; p < mu.size(); ++p) sum += mu.weights()[p] * phi.values[p];
  return sum;
}

Measure pushforward(const MapSequence& seq, std::size_t step, const Measure& mu) {
  if (mu.size() != seq.space().size()) throw std::invalid_argument("measure does not match the space");
  const StepMap map = seq.step_map(step);
  std::vector<double> image(mu.size(), 0.0);
  for (std::size_t p = 0; p < mu.size(); ++p) image[map[p]] += mu.weights()[p];
  const double total = std::accumulate(image.begin(), image.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    for (double& v : image) v /= total;
  }
  return Measure(std::move(image), mu.label() + "@f" + std::to_string(step));
}

double total_variation(const Measure& a, const Measure& b) {
  if (a.size() != b.size()) throw std::invalid_argument("measures live on different spaces");
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) s += std::abs(a.weights()[p] - b.weights()[p]);
  return 0.5 * s;
}

std::vector<DefectRow> invariance_defect_table(const MapSequence& seq, const Measure& mu,
                                               std::span<const Potential> dictionary, std::size_t max_step) {
  if (max_step == 0) throw std::invalid_argument("step bound must be at least 1");
  if (dictionary.empty()) throw std::invalid_argument("potential dictionary must be nonempty");
  std::vector<DefectRow> rows;
  for (std::size_t n = 1; n <= max_step; ++n) {
    const StepMap map = seq.step_map(n);
    for (const Potential& psi : dictionary) {
      if (psi.size() != mu.size()) throw std::invalid_argument("potential does not match the measure");
      double composed = 0.0, plain = 0.0;
      for (std::size_t p = 0; p < mu.size(); ++p) {
        composed += mu.weights()[p] * psi.values[map[p]];
        plain += mu.weights()[p] * psi.values[p];
      }
      rows.push_back({n, psi.label, std::abs(composed - plain)});
    }
  }
  return rows;
}

double invariance_defect(const MapSequence& seq, const Measure& mu, std::span<const Potential> dictionary,
                         std::size_t max_step) {
  double worst = 0.0;
  for (const auto& row : invariance_defect_table(seq, mu, dictionary, max_step)) worst = std::max(worst, row.defect);
  return worst;
}

double invariance_residual(std::span<const StepMap> maps, std::span<const double> weights) {
  double total = 0.0;
  std::vector<double> image(weights.size());
  for (const StepMap& map : maps) {
    std::fill(image.begin(), image.end(), 0.0);
    for (std::size_t p = 0; p < weights.size(); ++p) image[map[p]] += weights[p];
    for (std::size_t p = 0; p < weights.size(); ++p) total += std::abs(image[p] - weights[p]);
  }
  return total;
}

std::vector<StepMap> distinct_step_maps(const MapSequence& seq, std::size_t max_step) {
  if (max_step == 0) throw std::invalid_argument("step bound must be at least 1");
  std::vector<StepMap> maps;
  const std::size_t steps = seq.period() ? std::min(max_step, *seq.period()) : max_step;
  for (std::size_t n = 1; n <= steps; ++n) {
    StepMap map = seq.step_map(n);
    if (std::find(maps.begin(), maps.end(), map) == maps.end()) maps.push_back(std::move(map));
  }
  return maps;
}

namespace {

// Points lying on a cycle of the functional graph of `map`.
std::vector<bool> recurrent_points(const StepMap& map) {
  const std::size_t n = map.size();
  std::vector<int> state(n, 0);  // 0 unseen, 1 on current path, 2 done
  std::vector<bool> on_cycle(n, false);
  std::vector<PointId> path;
  for (PointId start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    path.clear();
    PointId p = start;
    while (state[p] == 0) {
      state[p] = 1;
      path.push_back(p);
      p = map[p];
    }
    if (state[p] == 1) {
      PointId q = p;
      do {
        on_cycle[q] = true;
        q = map[q];
      } while (q != p);
    }
    for (PointId v : path) state[v] = 2;
  }
  return on_cycle;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

// Support of every invariant measure of a point map is on its cycles, with
// equal weight along each cycle; a common invariant measure therefore lives on
// classes of points joined by cycles of every map and recurrent for all.
std::vector<bool> admissible_support(std::span<const StepMap> maps, std::size_t points) {
  std::vector<bool> all_recurrent(points, true);
  DisjointSets classes(points);
  for (const StepMap& map : maps) {
    const auto rec = recurrent_points(map);
    for (std::size_t p = 0; p < points; ++p) {
      if (!rec[p]) {
        all_recurrent[p] = false;
      } else {
        classes.unite(p, map[p]);
      }
    }
  }
  std::vector<bool> class_ok(points, true);
  for (std::size_t p = 0; p < points; ++p)
    if (!all_recurrent[p]) class_ok[classes.find(p)] = false;
  std::vector<bool> support(points, false);
  for (std::size_t p = 0; p < points; ++p) support[p] = class_ok[classes.find(p)];
  return support;
}

std::pair<double, std::vector<double>> subgradient_minimize(std::span<const StepMap> maps, std::size_t points,
                                                            std::size_t iterations) {
  std::vector<double> w(points, 1.0 / static_cast<double>(points));
  std::vector<double> best = w;
  double best_value = invariance_residual(maps, w);
  std::vector<double> image(points), grad(points);
  for (std::size_t k = 1; k <= iterations && best_value > 0.0; ++k) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const StepMap& map : maps) {
      std::fill(image.begin(), image.end(), 0.0);
      for (std::size_t p = 0; p < points; ++p) image[map[p]] += w[p];
      for (std::size_t p = 0; p < points; ++p) {
        const double s_image = (image[map[p]] - w[map[p]]) > 0 ? 1.0 : ((image[map[p]] - w[map[p]]) < 0 ? -1.0 : 0.0);
        const double s_self = (image[p] - w[p]) > 0 ? 1.0 : ((image[p] - w[p]) < 0 ? -1.0 : 0.0);
        grad[p] += s_image - s_self;
      }
    }
    const double norm = std::sqrt(std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0));
    if (norm == 0.0) break;
    const double step = 1.0 / (std::sqrt(static_cast<double>(k)) * norm * static_cast<double>(points));
    for (std::size_t p = 0; p < points; ++p) w[p] -= step * grad[p];
    w = project_to_simplex(w);
    const double value = invariance_residual(maps, w);
    if (value < best_value) {
      best_value = value;
      best = w;
    }
  }
  return {best_value, best};
}

}  // namespace

std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= total;
  return out;
}

std::pair<double, std::vector<double>> min_invariance_residual_lp(std::span<const StepMap> maps) {
  if (maps.empty()) throw std::invalid_argument("need at least one map");
  const std::size_t points = maps.front().size();
  const std::size_t k = maps.size();
  // Variables: w (points), then per map u and v (points each) with
  // (T w - w)_q - u_q + v_q = 0; one row sum w = 1.
  LinearProgram lp(points * k + 1, points * (1 + 2 * k));
  for (std::size_t m = 0; m < k; ++m) {
    const StepMap& map = maps[m];
    const std::size_t u0 = points + 2 * m * points;
    const std::size_t v0 = u0 + points;
    for (std::size_t p = 0; p < points; ++p) {
      lp.at(m * points + map[p], p) += 1.0;
      lp.at(m * points + p, p) -= 1.0;
    }
    for (std::size_t q = 0; q < points; ++q) {
      lp.at(m * points + q, u0 + q) = -1.0;
      lp.at(m * points + q, v0 + q) = 1.0;
      lp.c[u0 + q] = 1.0;
      lp.c[v0 + q] = 1.0;
    }
  }
  const std::size_t sum_row = points * k;
  for (std::size_t p = 0; p < points; ++p) lp.at(sum_row, p) = 1.0;
  lp.b[sum_row] = 1.0;
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::optimal) {
    throw std::runtime_error("invariance residual LP ended with status " + to_string(res.status));
  }
  std::vector<double> w(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(points));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return {res.objective, w};
}

InvariantSearch find_common_invariant(const MapSequence& seq, std::size_t max_step,
                                      const InvariantSearchOptions& options) {
  const auto maps = distinct_step_maps(seq, max_step);
  const std::size_t points = seq.space().size();
  const auto support = admissible_support(maps, points);
  const auto count = static_cast<std::size_t>(std::count(support.begin(), support.end(), true));
  if (count > 0) {
    std::vector<double> w(points, 0.0);
    for (std::size_t p = 0; p < points; ++p)
      if (support[p]) w[p] = 1.0 / static_cast<double>(count);
    const double residual = invariance_residual(maps, w);
    Measure mu(std::move(w), "invariant");
    return {residual <= options.tolerance, std::move(mu), residual, "cycle-classes", maps.size()};
  }
  if (points * maps.size() <= options.lp_row_limit) {
    auto [value, w] = min_invariance_residual_lp(maps);
    value = std::max(value, invariance_residual(maps, w));
    return {false, Measure(std::move(w), "residual-minimizer"), value, "lp", maps.size()};
  }
  auto [value, w] = subgradient_minimize(maps, points, options.subgradient_iterations);
  return {false, Measure(std::move(w), "residual-minimizer"), value, "projected-subgradient", maps.size()};
}

nlohmann::json to_json(const Measure& mu) { return {{"label", mu.label()}, {"weights", mu.weights()}}; }

Measure measure_from_json(const nlohmann::json& doc) {
  if (!doc.contains("weights")) throw std::invalid_argument("measure JSON needs \"weights\"");
  return Measure(doc.at("weights").get<std::vector<double>>(), doc.value("label", std::string{}));
}

}  // namespace nadsthermo
