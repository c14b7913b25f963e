#include "nadsthermo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nadsthermo/format.hpp"

namespace nadsthermo {

double Potential::max() const { return *std::max_element(values.begin(), values.end()); }
double Potential::min() const { return *std::min_element(values.begin(), values.end()); }
double Potential::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

Potential constant_potential(const SampledSpace& space, double c, std::string label) {
  if (label.empty()) label = "const:" + format_number(c);
  return {std::move(label), std::vector<double>(space.size(), c)};
}

Potential zero_potential(const SampledSpace& space) { return {"zero", std::vector<double>(space.size(), 0.0)}; }

Potential coord_potential(const SampledSpace& space) {
  const auto c = space.coords();
  return {"coord", std::vector<double>(c.begin(), c.end())};
}

Potential first_symbol_potential(const SampledSpace& space, std::span<const double> values) {
  if (space.kind() != SpaceKind::symbolic) throw std::invalid_argument("first-symbol potential needs a symbolic space");
  if (values.size() != space.symbolic_params().alphabet_size) {
    throw std::invalid_argument("first-symbol potential needs one value per symbol");
  }
  std::string label = "first-symbol:[";
  for (std::size_t i = 0; i < values.size(); ++i) label += (i ? "," : "") + format_number(values[i]);
  label += "]";
  Potential phi{label, std::vector<double>(space.size())};
  for (PointId p = 0; p < space.size(); ++p) phi.values[p] = values[space.word(p)[0]];
  return phi;
}

namespace {
Potential trig_potential(const SampledSpace& space, int frequency, bool cosine) {
  Potential phi{(cosine ? "cos:" : "sin:") + std::to_string(frequency), std::vector<double>(space.size())};
  for (PointId p = 0; p < space.size(); ++p) {
    const double arg = 2.0 * std::numbers::pi * frequency * space.coord(p);
    phi.values[p] = cosine ? std::cos(arg) : std::sin(arg);
  }
  return phi;
}
}  // namespace

Potential cosine_potential(const SampledSpace& space, int frequency) { return trig_potential(space, frequency, true); }
Potential sine_potential(const SampledSpace& space, int frequency) { return trig_potential(space, frequency, false); }

Potential lipschitz_random_potential(const SampledSpace& space, std::uint64_t seed, double lipschitz) {
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("Lipschitz constant must be nonnegative");
  std::mt19937_64 rng(seed);
  const std::size_t anchors = std::min<std::size_t>(6, space.size());
  std::vector<PointId> centers(anchors);
  std::vector<double> heights(anchors);
  for (std::size_t j = 0; j < anchors; ++j) {
    centers[j] = static_cast<PointId>(rng() % space.size());
    heights[j] = unit_uniform(rng());
  }
  Potential phi{"lipschitz-random:" + std::to_string(seed) + "," + format_number(lipschitz),
                std::vector<double>(space.size())};
  for (PointId p = 0; p < space.size(); ++p) {
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < anchors; ++j) v = std::min(v, heights[j] + lipschitz * space.distance(p, centers[j]));
    phi.values[p] = v;
  }
  return phi;
}

Potential shifted(const Potential& phi, double c) {
  Potential out{"(" + phi.label + ")+" + format_number(c), phi.values};
  for (double& v : out.values) v += c;
  return out;
}

Potential scaled(const Potential& phi, double factor) {
  Potential out{format_number(factor) + "*(" + phi.label + ")", phi.values};
  for (double& v : out.values) v *= factor;
  return out;
}

Potential mixed(const Potential& phi, const Potential& psi, double t) {
  if (phi.size() != psi.size()) throw std::invalid_argument("potentials live on different spaces");
  Potential out{"mix(" + phi.label + "," + psi.label + "," + format_number(t) + ")",
                std::vector<double>(phi.size())};
  for (std::size_t p = 0; p < phi.size(); ++p) out.values[p] = t * phi.values[p] + (1.0 - t) * psi.values[p];
  return out;
}

Potential coboundary(const Potential& psi, std::span<const PointId> map, std::string label) {
  if (map.size() != psi.size()) throw std::invalid_argument("map and potential live on different spaces");
  Potential out{std::move(label), std::vector<double>(psi.size())};
  for (std::size_t p = 0; p < psi.size(); ++p) out.values[p] = psi.values[map[p]] - psi.values[p];
  return out;
}

}  // namespace nadsthermo
