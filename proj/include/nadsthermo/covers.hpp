#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nadsthermo/nads.hpp"

namespace nadsthermo {

/// bowen: d(F_i a, F_i b) for 0 <= i <= n-1.
/// misiurewicz: d(F_i a, F_i b) for 1 <= i <= n (pullback entourages delta_n).
enum class SeparationMode { bowen, misiurewicz };

std::string to_string(SeparationMode mode);

struct StepWindow {
  std::size_t first;
  std::size_t last;
};

StepWindow step_window(SeparationMode mode, std::size_t n);

/// Points pairwise at window distance >= eps, maximal by construction.
struct SeparatedSet {
  std::vector<PointId> members;
  std::size_t n = 0;
  double eps = 0.0;
  SeparationMode mode = SeparationMode::bowen;
  std::optional<std::string> weight_label;
};

/// Greedy maximal (n, eps)-separated set. Candidates are visited in ascending
/// index order, or, when `weight` is given, in decreasing order of the
/// mode-appropriate orbit sum of the weight (ties by index).
SeparatedSet max_separated_set(const MapSequence& seq, std::size_t n, double eps, SeparationMode mode,
                               const Potential* weight = nullptr);

/// Greedy cover: every point lies at window distance < eps from a member.
/// Uses lazy greedy set cover up to kSpanningCoverLimit points and a maximal
/// separated set beyond.
std::vector<PointId> min_spanning_set(const MapSequence& seq, std::size_t n, double eps, SeparationMode mode);

inline constexpr std::size_t kSpanningCoverLimit = 8192;

/// m^(n+k): maximal cardinality of an (n, 2^-k)-separated set of the full shift
/// on m symbols, sampled at word depth `depth`. Throws if depth < n + k.
std::uint64_t separated_count_exact_symbolic(std::size_t alphabet, std::size_t n, std::size_t k, std::size_t depth);

/// Independent pairwise check of the separation invariant.
bool verify_separated(const MapSequence& seq, const std::vector<PointId>& members, std::size_t n, double eps,
                      SeparationMode mode);
/// Every point within window distance < eps of some member.
bool verify_spanning(const MapSequence& seq, const std::vector<PointId>& members, std::size_t n, double eps,
                     SeparationMode mode);
/// No point outside the set is separated from all members.
bool verify_maximal(const MapSequence& seq, const std::vector<PointId>& members, std::size_t n, double eps,
                    SeparationMode mode);

/// Largest window distance over all pairs.
double window_diameter(const MapSequence& seq, std::size_t n, SeparationMode mode);

}  // namespace nadsthermo
