#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nadsthermo/potential.hpp"
#include "nadsthermo/space.hpp"

namespace nadsthermo {

/// A self-map of a sampled space tabulated as image indices.
using StepMap = std::vector<PointId>;
/// (step n >= 1, point) -> point. Must be pure and reentrant.
using StepRule = std::function<PointId(std::size_t, PointId)>;

/// Compositions F_0 = id, F_i = f_i o ... o f_1 for every point of the space,
/// stored step-major: at(i, p) = F_i(p) for 0 <= i <= horizon.
class OrbitBundle {
 public:
  OrbitBundle(std::size_t points, std::size_t horizon, std::vector<PointId> data);

  std::size_t horizon() const { return horizon_; }
  std::size_t points() const { return points_; }
  PointId at(std::size_t step, PointId p) const { return data_[step * points_ + p]; }
  /// F_step for every point.
  std::span<const PointId> step(std::size_t step) const { return {data_.data() + step * points_, points_}; }

 private:
  std::size_t points_;
  std::size_t horizon_;
  std::vector<PointId> data_;
};

/// A nonautonomous system f_1, f_2, ... of self-maps of one sampled space.
class MapSequence {
 public:
  /// Step n applies maps[(n - 1) mod maps.size()]; the period is maps.size().
  static MapSequence cyclic(std::shared_ptr<const SampledSpace> space, std::vector<StepMap> maps, std::string label,
                            double snap_error = 0.0);
  static MapSequence from_rule(std::shared_ptr<const SampledSpace> space, StepRule rule, std::string label,
                               std::optional<std::size_t> period = std::nullopt);

  PointId apply(std::size_t step, PointId x) const;
  StepMap step_map(std::size_t step) const;

  const SampledSpace& space() const { return *space_; }
  const std::shared_ptr<const SampledSpace>& space_ptr() const { return space_; }
  std::optional<std::size_t> period() const { return period_; }
  const std::string& label() const { return label_; }
  /// Largest displacement introduced by snapping off-grid images to the grid.
  double snap_error() const { return snap_error_; }

  /// Compositions up to at least `horizon`; memoized and shared between copies.
  std::shared_ptr<const OrbitBundle> orbits(std::size_t horizon) const;

 private:
  struct Cache;

  MapSequence() = default;

  std::shared_ptr<const SampledSpace> space_;
  std::shared_ptr<const std::vector<StepMap>> maps_;
  StepRule rule_;
  std::optional<std::size_t> period_;
  std::string label_;
  double snap_error_ = 0.0;
  std::shared_ptr<Cache> cache_;
};

struct OrbitTable {
  PointId base_point = 0;
  std::size_t horizon = 0;
  std::vector<PointId> entries;  // F_0(x), ..., F_n(x)
};

OrbitTable composition_orbit(const MapSequence& seq, PointId x, std::size_t n);

/// d_n(x, y) = max_{0 <= i <= n-1} d(F_i x, F_i y).
double bowen_metric(const MapSequence& seq, PointId x, PointId y, std::size_t n);

/// Max of d(F_i x, F_i y) over first <= i <= last.
double window_distance(const SampledSpace& space, const OrbitBundle& orbits, PointId x, PointId y, std::size_t first,
                       std::size_t last);

/// S_n phi(x) = sum_{i=0}^{n-1} phi(F_i x).
double birkhoff_sum(const MapSequence& seq, const Potential& phi, PointId x, std::size_t n);
/// phi_n(x) = sum_{i=1}^{n} phi(F_i x).
double misiurewicz_sum(const MapSequence& seq, const Potential& phi, PointId x, std::size_t n);

/// sum_{i=first}^{last} phi(F_i p) for every point p.
std::vector<double> orbit_sums(const OrbitBundle& orbits, const Potential& phi, std::size_t first, std::size_t last);

}  // namespace nadsthermo
