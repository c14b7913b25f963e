#include "nadsthermo/covers.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace nadsthermo {

namespace {

// Orbit windows copied point-major so a pair test walks contiguous memory.
class TrajectoryView {
 public:
  TrajectoryView(const MapSequence& seq, std::size_t n, SeparationMode mode)
      : space_(seq.space()), points_(space_.size()) {
    const StepWindow w = step_window(mode, n);
    width_ = w.last - w.first + 1;
    const auto orbits = seq.orbits(w.last);
    ids_.resize(points_ * width_);
    for (std::size_t j = 0; j < width_; ++j) {
      const auto row = orbits->step(w.first + j);
      for (std::size_t p = 0; p < points_; ++p) ids_[p * width_ + j] = row[p];
    }
    if (space_.kind() == SpaceKind::interval || space_.kind() == SpaceKind::circle) {
      coords_.resize(ids_.size());
      for (std::size_t i = 0; i < ids_.size(); ++i) coords_[i] = space_.coord(ids_[i]);
    }
  }

  std::size_t points() const { return points_; }

  /// True when some step puts the two orbits at distance >= eps.
  bool separated(PointId a, PointId b, double eps) const {
    switch (space_.kind()) {
      case SpaceKind::interval: {
        const double* x = coords_.data() + static_cast<std::size_t>(a) * width_;
        const double* y = coords_.data() + static_cast<std::size_t>(b) * width_;
        for (std::size_t j = 0; j < width_; ++j) {
          double d = x[j] - y[j];
          if (d < 0) d = -d;
          if (d >= eps) return true;
        }
        return false;
      }
      case SpaceKind::circle: {
        const double* x = coords_.data() + static_cast<std::size_t>(a) * width_;
        const double* y = coords_.data() + static_cast<std::size_t>(b) * width_;
        for (std::size_t j = 0; j < width_; ++j) {
          double d = x[j] - y[j];
          if (d < 0) d = -d;
          if (d > 0.5) d = 1.0 - d;
          if (d >= eps) return true;
        }
        return false;
      }
      default: {
        const PointId* x = ids_.data() + static_cast<std::size_t>(a) * width_;
        const PointId* y = ids_.data() + static_cast<std::size_t>(b) * width_;
        for (std::size_t j = 0; j < width_; ++j)
          if (space_.distance(x[j], y[j]) >= eps) return true;
        return false;
      }
    }
  }

 private:
  const SampledSpace& space_;
  std::size_t points_;
  std::size_t width_ = 0;
  std::vector<PointId> ids_;
  std::vector<double> coords_;
};

void check_args(std::size_t n, double eps) {
  if (n == 0) throw std::invalid_argument("horizon n must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("scale must be positive");
}

std::vector<PointId> greedy_separated(const TrajectoryView& view, const std::vector<PointId>& order, double eps) {
  std::vector<PointId> members;
  for (PointId p : order) {
    bool ok = true;
    for (PointId q : members) {
      if (!view.separated(p, q, eps)) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(p);
  }
  return members;
}

}  // namespace

std::string to_string(SeparationMode mode) { return mode == SeparationMode::bowen ? "bowen" : "misiurewicz"; }

StepWindow step_window(SeparationMode mode, std::size_t n) {
  if (n == 0) throw std::invalid_argument("horizon n must be at least 1");
  return mode == SeparationMode::bowen ? StepWindow{0, n - 1} : StepWindow{1, n};
}

SeparatedSet max_separated_set(const MapSequence& seq, std::size_t n, double eps, SeparationMode mode,
                               const Potential* weight) {
  check_args(n, eps);
  const std::size_t size = seq.space().size();
  std::vector<PointId> order(size);
  std::iota(order.begin(), order.end(), PointId{0});
  SeparatedSet out;
  out.n = n;
  out.eps = eps;
  out.mode = mode;
  if (weight) {
    const StepWindow w = step_window(mode, n);
    const auto sums = orbit_sums(*seq.orbits(w.last), *weight, w.first, w.last);
    std::stable_sort(order.begin(), order.end(), [&](PointId a, PointId b) { return sums[a] > sums[b]; });
    out.weight_label = weight->label;
  }
  const TrajectoryView view(seq, n, mode);
  out.members = greedy_separated(view, order, eps);
  return out;
}

std::vector<PointId> min_spanning_set(const MapSequence& seq, std::size_t n, double eps, SeparationMode mode) {
  check_args(n, eps);
  const std::size_t size = seq.space().size();
  const TrajectoryView view(seq, n, mode);
  if (size > kSpanningCoverLimit) {
    std::vector<PointId> order(size);
    std::iota(order.begin(), order.end(), PointId{0});
    return greedy_separated(view, order, eps);
  }

  const std::size_t words = (size + 63) / 64;
  std::vector<std::uint64_t> adjacency(size * words, 0);
  auto set_bit = [&](std::size_t row, std::size_t col) { adjacency[row * words + col / 64] |= 1ULL << (col % 64); };
  for (PointId a = 0; a < size; ++a) {
    set_bit(a, a);
    for (PointId b = a + 1; b < size; ++b) {
      if (!view.separated(a, b, eps)) {
        set_bit(a, b);
        set_bit(b, a);
      }
    }
  }
  std::vector<std::uint64_t> uncovered(words, ~0ULL);
  if (size % 64) uncovered.back() = (1ULL << (size % 64)) - 1;
  std::size_t remaining = size;
  auto gain = [&](PointId c) {
    std::size_t g = 0;
    const std::uint64_t* row = adjacency.data() + static_cast<std::size_t>(c) * words;
    for (std::size_t w = 0; w < words; ++w) g += static_cast<std::size_t>(std::popcount(row[w] & uncovered[w]));
    return g;
  };

  // Max-heap on (gain, -index); stored gains are upper bounds of current gains.
  using Entry = std::pair<std::size_t, PointId>;
  auto cmp = [](const Entry& x, const Entry& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second > y.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (PointId c = 0; c < size; ++c) heap.emplace(gain(c), c);

  std::vector<PointId> cover;
  while (remaining > 0 && !heap.empty()) {
    auto [stored, c] = heap.top();
    heap.pop();
    const std::size_t g = gain(c);
    if (g == 0) continue;
    if (g < stored) {
      heap.emplace(g, c);
      continue;
    }
    cover.push_back(c);
    const std::uint64_t* row = adjacency.data() + static_cast<std::size_t>(c) * words;
    for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~row[w];
    remaining -= g;
  }
  // A maximal separated set also spans; keep whichever is smaller.
  std::vector<PointId> order(size);
  std::iota(order.begin(), order.end(), PointId{0});
  std::vector<PointId> separated = greedy_separated(view, order, eps);
  return separated.size() < cover.size() ? separated : cover;
}

std::uint64_t separated_count_exact_symbolic(std::size_t alphabet, std::size_t n, std::size_t k, std::size_t depth) {
  if (alphabet < 2) throw std::invalid_argument("alphabet must have at least 2 symbols");
  if (n == 0) throw std::invalid_argument("horizon n must be at least 1");
  if (depth < n + k) {
    throw std::invalid_argument("word depth " + std::to_string(depth) + " is below n + k = " + std::to_string(n + k) +
                                "; truncation would corrupt the count");
  }
  std::uint64_t count = 1;
  for (std::size_t j = 0; j < n + k; ++j) {
    if (count > UINT64_MAX / alphabet) throw std::overflow_error("separated count overflows 64 bits");
    count *= alphabet;
  }
  return count;
}

bool verify_separated(const MapSequence& seq, const std::vector<PointId>& members, std::size_t n, double eps,
                      SeparationMode mode) {
  const StepWindow w = step_window(mode, n);
  const auto orbits = seq.orbits(w.last);
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (window_distance(seq.space(), *orbits, members[a], members[b], w.first, w.last) < eps) return false;
  return true;
}

bool verify_spanning(const MapSequence& seq, const std::vector<PointId>& members, std::size_t n, double eps,
                     SeparationMode mode) {
  const StepWindow w = step_window(mode, n);
  const auto orbits = seq.orbits(w.last);
  for (PointId p = 0; p < seq.space().size(); ++p) {
    const bool covered = std::any_of(members.begin(), members.end(), [&](PointId q) {
      return window_distance(seq.space(), *orbits, p, q, w.first, w.last) < eps;
    });
    if (!covered) return false;
  }
  return true;
}

bool verify_maximal(const MapSequence& seq, const std::vector<PointId>& members, std::size_t n, double eps,
                    SeparationMode mode) {
  const StepWindow w = step_window(mode, n);
  const auto orbits = seq.orbits(w.last);
  std::vector<bool> in(seq.space().size(), false);
  for (PointId q : members) in[q] = true;
  for (PointId p = 0; p < seq.space().size(); ++p) {
    if (in[p]) continue;
    const bool blocked = std::any_of(members.begin(), members.end(), [&](PointId q) {
      return window_distance(seq.space(), *orbits, p, q, w.first, w.last) < eps;
    });
    if (!blocked) return false;
  }
  return true;
}

double window_diameter(const MapSequence& seq, std::size_t n, SeparationMode mode) {
  const StepWindow w = step_window(mode, n);
  const auto orbits = seq.orbits(w.last);
  double diam = 0.0;
  for (PointId a = 0; a < seq.space().size(); ++a)
    for (PointId b = a + 1; b < seq.space().size(); ++b)
      diam = std::max(diam, window_distance(seq.space(), *orbits, a, b, w.first, w.last));
  return diam;
}

}  // namespace nadsthermo
