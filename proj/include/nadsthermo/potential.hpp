#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nadsthermo/space.hpp"

namespace nadsthermo {

/// A real function on the points of a sampled space, tabulated per point.
struct Potential {
  std::string label;
  std::vector<double> values;

  double operator()(PointId p) const { return values[p]; }
  std::size_t size() const { return values.size(); }
  double max() const;
  double min() const;
  double sup_norm() const;
};

Potential constant_potential(const SampledSpace& space, double c, std::string label = {});
Potential zero_potential(const SampledSpace& space);
/// The coordinate representative of each point.
Potential coord_potential(const SampledSpace& space);
/// phi(x) = values[x_0] on a symbolic space.
Potential first_symbol_potential(const SampledSpace& space, std::span<const double> values);
/// cos(2 pi k t) / sin(2 pi k t) of the coordinate.
Potential cosine_potential(const SampledSpace& space, int frequency);
Potential sine_potential(const SampledSpace& space, int frequency);
/// Random L-Lipschitz potential: phi(x) = min_j (a_j + L d(x, c_j)) over a few
/// random anchors c_j with random heights a_j in [0, 1). Deterministic in seed.
Potential lipschitz_random_potential(const SampledSpace& space, std::uint64_t seed, double lipschitz);

Potential shifted(const Potential& phi, double c);
Potential scaled(const Potential& phi, double factor);
/// t phi + (1 - t) psi.
Potential mixed(const Potential& phi, const Potential& psi, double t);
/// (psi o map) - psi for a tabulated self-map.
Potential coboundary(const Potential& psi, std::span<const PointId> map, std::string label);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw; stable
/// across standard library implementations.
double unit_uniform(std::uint64_t bits);

}  // namespace nadsthermo
