#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nadsthermo {

using PointId = std::uint32_t;

enum class SpaceKind { interval, circle, symbolic, custom };

std::string to_string(SpaceKind kind);

/// Full-shift cylinder model: words of length `depth` over `alphabet_size` symbols.
struct SymbolicParams {
  std::size_t alphabet_size = 2;
  std::size_t depth = 1;
};

/// Maximum number of points any space may hold. Reads NADS_THERMO_POINT_BUDGET,
/// default 65536.
std::size_t point_budget();

/// Finite model of a compact metric space.
///
/// Grids of [0,1] (interval) and of the unit circle (circle) store one real
/// coordinate per point. Symbolic spaces enumerate all words of a fixed depth in
/// lexicographic order (first symbol most significant) with the metric
/// 2^(-j), j the first index where two words differ. Custom spaces carry an
/// explicit symmetric metric matrix.
///
/// Immutable after construction.
class SampledSpace {
 public:
  static SampledSpace interval(std::size_t size);
  static SampledSpace circle(std::size_t size);
  static SampledSpace symbolic(SymbolicParams params);
  /// Validates symmetry, zero diagonal, nonnegativity and the triangle
  /// inequality (exhaustively up to 512 points, on sampled triples beyond).
  static SampledSpace custom(std::vector<std::string> labels, std::vector<double> metric);
  /// Reads {"points": [...], "metric": [[...]]}.
  static SampledSpace from_json_text(const std::string& text);
  static SampledSpace from_json_file(const std::string& path);

  std::size_t size() const { return size_; }
  SpaceKind kind() const { return kind_; }
  double diameter() const { return diameter_; }
  /// Grid spacing for grids, 2^-(D-1) for symbolic spaces, the smallest
  /// positive distance for custom spaces.
  double mesh() const { return mesh_; }

  double distance(PointId a, PointId b) const {
    switch (kind_) {
      case SpaceKind::interval: {
        const double d = coords_[a] - coords_[b];
        return d < 0 ? -d : d;
      }
      case SpaceKind::circle: {
        double d = coords_[a] - coords_[b];
        if (d < 0) d = -d;
        return d > 0.5 ? 1.0 - d : d;
      }
      case SpaceKind::symbolic:
        return symbolic_distance(a, b);
      case SpaceKind::custom:
        return metric_[static_cast<std::size_t>(a) * size_ + b];
    }
    return 0.0;
  }

  /// Real representative of a point: grid position, or sum_j x_j m^-(j+1) for
  /// words, or the point index for custom spaces.
  double coord(PointId p) const { return coords_[p]; }
  std::span<const double> coords() const { return coords_; }

  /// Symbols of a word; empty span for non-symbolic spaces.
  std::span<const std::uint8_t> word(PointId p) const;
  const SymbolicParams& symbolic_params() const { return symbolic_; }
  /// Index of a word given as symbols.
  PointId word_index(std::span<const std::uint8_t> symbols) const;

  std::string label(PointId p) const;

  /// Nearest grid point to a real position (circle positions are taken mod 1).
  /// Ties go to the smaller index. Only valid for grid kinds.
  PointId snap(double position) const;

  bool contains(PointId p) const { return p < size_; }
  void require_point(PointId p) const;

 private:
  SampledSpace() = default;
  double symbolic_distance(PointId a, PointId b) const;
  void compute_diameter();

  SpaceKind kind_ = SpaceKind::interval;
  std::size_t size_ = 0;
  double diameter_ = 0.0;
  double mesh_ = 0.0;
  std::vector<double> coords_;
  SymbolicParams symbolic_{};
  std::vector<std::uint8_t> words_;
  std::vector<double> metric_;
  std::vector<std::string> labels_;
};

/// Greedy farthest-point eps-net: every point is within eps of a returned
/// point. The first net point is point 0; ties go to the smaller index.
std::vector<PointId> epsilon_net(const SampledSpace& space, double eps);

}  // namespace nadsthermo
