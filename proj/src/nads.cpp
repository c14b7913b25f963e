#include "nadsthermo/nads.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace nadsthermo {

OrbitBundle::OrbitBundle(std::size_t points, std::size_t horizon, std::vector<PointId> data)
    : points_(points), horizon_(horizon), data_(std::move(data)) {
  if (data_.size() != points_ * (horizon_ + 1)) throw std::invalid_argument("orbit bundle has the wrong size");
}

struct MapSequence::Cache {
  std::mutex mutex;
  std::shared_ptr<const OrbitBundle> bundle;
};

MapSequence MapSequence::cyclic(std::shared_ptr<const SampledSpace> space, std::vector<StepMap> maps,
                                std::string label, double snap_error) {
  if (!space) throw std::invalid_argument("map sequence needs a space");
  if (maps.empty()) throw std::invalid_argument("cyclic map sequence needs at least one map");
  for (const auto& map : maps) {
    if (map.size() != space->size()) throw std::invalid_argument("step map size does not match the space");
    for (PointId q : map) {
      if (q >= space->size()) throw std::invalid_argument("step map leaves the space");
    }
  }
  MapSequence seq;
  seq.space_ = std::move(space);
  seq.period_ = maps.size();
  seq.maps_ = std::make_shared<const std::vector<StepMap>>(std::move(maps));
  seq.label_ = std::move(label);
  seq.snap_error_ = snap_error;
  seq.cache_ = std::make_shared<Cache>();
  return seq;
}

MapSequence MapSequence::from_rule(std::shared_ptr<const SampledSpace> space, StepRule rule, std::string label,
                                   std::optional<std::size_t> period) {
  if (!space) throw std::invalid_argument("map sequence needs a space");
  if (!rule) throw std::invalid_argument("map sequence needs a rule");
  if (period && *period == 0) throw std::invalid_argument("period must be positive");
  MapSequence seq;
  seq.space_ = std::move(space);
  seq.rule_ = std::move(rule);
  seq.period_ = period;
  seq.label_ = std::move(label);
  seq.cache_ = std::make_shared<Cache>();
  return seq;
}

PointId MapSequence::apply(std::size_t step, PointId x) const {
  if (step == 0) throw std::invalid_argument("steps are numbered from 1");
  space_->require_point(x);
  if (maps_) return (*maps_)[(step - 1) % maps_->size()][x];
  const PointId y = rule_(step, x);
  if (y >= space_->size()) throw std::logic_error("step rule of '" + label_ + "' leaves the space");
  return y;
}

StepMap MapSequence::step_map(std::size_t step) const {
  if (step == 0) throw std::invalid_argument("steps are numbered from 1");
  if (maps_) return (*maps_)[(step - 1) % maps_->size()];
  StepMap map(space_->size());
  for (PointId p = 0; p < space_->size(); ++p) map[p] = apply(step, p);
  return map;
}

std::shared_ptr<const OrbitBundle> MapSequence::orbits(std::size_t horizon) const {
  std::lock_guard lock(cache_->mutex);
  if (cache_->bundle && cache_->bundle->horizon() >= horizon) return cache_->bundle;
  const std::size_t n = space_->size();
  std::vector<PointId> data(n * (horizon + 1));
  const std::size_t reuse = cache_->bundle ? cache_->bundle->horizon() : 0;
  if (cache_->bundle) {
    for (std::size_t i = 0; i <= reuse; ++i) {
      const auto row = cache_->bundle->step(i);
      std::copy(row.begin(), row.end(), data.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  } else {
    for (PointId p = 0; p < n; ++p) data[p] = p;
  }
  for (std::size_t i = reuse + 1; i <= horizon; ++i) {
    const StepMap map = step_map(i);
    const PointId* prev = data.data() + (i - 1) * n;
    PointId* cur = data.data() + i * n;
    for (std::size_t p = 0; p < n; ++p) cur[p] = map[prev[p]];
  }
  cache_->bundle = std::make_shared<const OrbitBundle>(n, horizon, std::move(data));
  return cache_->bundle;
}

OrbitTable composition_orbit(const MapSequence& seq, PointId x, std::size_t n) {
  seq.space().require_point(x);
  OrbitTable table{x, n, {}};
  table.entries.reserve(n + 1);
  table.entries.push_back(x);
  for (std::size_t i = 1; i <= n; ++i) table.entries.push_back(seq.apply(i, table.entries.back()));
  return table;
}

double window_distance(const SampledSpace& space, const OrbitBundle& orbits, PointId x, PointId y, std::size_t first,
                       std::size_t last) {
  double d = 0.0;
  for (std::size_t i = first; i <= last; ++i) d = std::max(d, space.distance(orbits.at(i, x), orbits.at(i, y)));
  return d;
}

double bowen_metric(const MapSequence& seq, PointId x, PointId y, std::size_t n) {
  if (n == 0) throw std::invalid_argument("bowen_metric needs n >= 1");
  seq.space().require_point(x);
  seq.space().require_point(y);
  const auto orbits = seq.orbits(n - 1);
  return window_distance(seq.space(), *orbits, x, y, 0, n - 1);
}

double birkhoff_sum(const MapSequence& seq, const Potential& phi, PointId x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("birkhoff_sum needs n >= 1");
  const OrbitTable orbit = composition_orbit(seq, x, n - 1);
  double sum = 0.0;
  for (PointId p : orbit.entries) sum += phi(p);
  return sum;
}

double misiurewicz_sum(const MapSequence& seq, const Potential& phi, PointId x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("misiurewicz_sum needs n >= 1");
  const OrbitTable orbit = composition_orbit(seq, x, n);
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) sum += phi(orbit.entries[i]);
  return sum;
}

std::vector<double> orbit_sums(const OrbitBundle& orbits, const Potential& phi, std::size_t first, std::size_t last) {
  if (last > orbits.horizon()) throw std::invalid_argument("orbit window exceeds the computed horizon");
  if (phi.size() != orbits.points()) throw std::invalid_argument("potential does not match the space");
  std::vector<double> sums(orbits.points(), 0.0);
  for (std::size_t i = first; i <= last; ++i) {
    const auto row = orbits.step(i);
    for (std::size_t p = 0; p < sums.size(); ++p) sums[p] += phi.values[row[p]];
  }
  return sums;
}

}  // namespace nadsthermo
