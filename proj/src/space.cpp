#include "nadsthermo/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nadsthermo {

namespace {

constexpr std::size_t kDefaultBudget = 65536;
constexpr std::size_t kExhaustiveTriangleLimit = 512;
constexpr std::size_t kSampledTriples = 200000;

void check_budget(std::size_t count) {
  const std::size_t budget = point_budget();
  if (count > budget) {
    throw std::invalid_argument("space of " + std::to_string(count) +
                                " points exceeds the point budget of " +
                                std::to_string(budget));
  }
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::interval: return "interval";
    case SpaceKind::circle: return "circle";
    case SpaceKind::symbolic: return "symbolic";
    case SpaceKind::custom: return "custom";
  }
  return "unknown";
}

std::size_t point_budget() {
  const char* env = std::getenv("NADS_THERMO_POINT_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultBudget;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || value == 0) {
    throw std::invalid_argument(std::string("invalid NADS_THERMO_POINT_BUDGET: ") + env);
  }
  return static_cast<std::size_t>(value);
}

SampledSpace SampledSpace::interval(std::size_t size) {
  if (size < 2) throw std::invalid_argument("interval grid needs at least 2 points");
  check_budget(size);
  SampledSpace s;
  s.kind_ = SpaceKind::interval;
  s.size_ = size;
  s.coords_.resize(size);
  const double denom = static_cast<double>(size - 1);
  for (std::size_t k = 0; k < size; ++k) s.coords_[k] = static_cast<double>(k) / denom;
  s.mesh_ = 1.0 / denom;
  s.diameter_ = 1.0;
  return s;
}

SampledSpace SampledSpace::circle(std::size_t size) {
  if (size < 2) throw std::invalid_argument("circle grid needs at least 2 points");
  check_budget(size);
  SampledSpace s;
  s.kind_ = SpaceKind::circle;
  s.size_ = size;
  s.coords_.resize(size);
  const double denom = static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) s.coords_[k] = static_cast<double>(k) / denom;
  s.mesh_ = 1.0 / denom;
  s.diameter_ = static_cast<double>(size / 2) / denom;
  return s;
}

SampledSpace SampledSpace::symbolic(SymbolicParams params) {
  if (params.alphabet_size < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (params.alphabet_size > 255) throw std::invalid_argument("alphabet size must be at most 255");
  if (params.depth < 1) throw std::invalid_argument("word depth must be at least 1");
  const std::size_t budget = point_budget();
  std::size_t count = 1;
  for (std::size_t j = 0; j < params.depth; ++j) {
    if (count > budget / params.alphabet_size) {
      throw std::invalid_argument("symbolic space " + std::to_string(params.alphabet_size) + "^" +
                                  std::to_string(params.depth) +
                                  " exceeds the point budget of " + std::to_string(budget));
    }
    count *= params.alphabet_size;
  }
  check_budget(count);

  SampledSpace s;
  s.kind_ = SpaceKind::symbolic;
  s.size_ = count;
  s.symbolic_ = params;
  const std::size_t m = params.alphabet_size;
  const std::size_t depth = params.depth;
  s.words_.resize(count * depth);
  s.coords_.resize(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (std::size_t j = depth; j-- > 0;) {
      s.words_[idx * depth + j] = static_cast<std::uint8_t>(rest % m);
      rest /= m;
    }
    double value = 0.0;
    double weight = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < depth; ++j) {
      value += weight * s.words_[idx * depth + j];
      weight /= static_cast<double>(m);
    }
    s.coords_[idx] = value;
  }
  s.mesh_ = std::ldexp(1.0, -static_cast<int>(depth - 1));
  s.diameter_ = 1.0;
  return s;
}

SampledSpace SampledSpace::custom(std::vector<std::string> labels, std::vector<double> metric) {
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("custom space needs at least one point");
  check_budget(n);
  if (metric.size() != n * n) {
    throw std::invalid_argument("metric matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  {
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("custom space point identifiers must be unique");
    }
  }
  auto at = [&](std::size_t i, std::size_t j) { return metric[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) throw std::invalid_argument("metric must vanish on the diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double d = at(i, j);
      if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("metric entries must be finite and nonnegative");
      if (d != at(j, i)) throw std::invalid_argument("metric must be symmetric");
    }
  }
  auto violates = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double lhs = at(a, b);
    const double rhs = at(a, c) + at(c, b);
    return lhs > rhs * (1.0 + 1e-12) + 1e-15;
  };
  if (n <= kExhaustiveTriangleLimit) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (violates(a, b, c)) {
            throw std::invalid_argument("metric violates the triangle inequality at (" + labels[a] + ", " +
                                        labels[b] + ", " + labels[c] + ")");
          }
  } else {
    std::mt19937_64 rng(0x5eed);
    for (std::size_t t = 0; t < kSampledTriples; ++t) {
      const std::size_t a = rng() % n, b = rng() % n, c = rng() % n;
      if (violates(a, b, c)) {
        throw std::invalid_argument("metric violates the triangle inequality at (" + labels[a] + ", " +
                                    labels[b] + ", " + labels[c] + ")");
      }
    }
  }

  SampledSpace s;
  s.kind_ = SpaceKind::custom;
  s.size_ = n;
  s.metric_ = std::move(metric);
  s.labels_ = std::move(labels);
  s.coords_.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.coords_[i] = static_cast<double>(i);
  s.compute_diameter();
  double mesh = std::numeric_limits<double>::infinity();
  for (double d : s.metric_)
    if (d > 0.0) mesh = std::min(mesh, d);
  s.mesh_ = std::isfinite(mesh) ? mesh : 0.0;
  return s;
}

SampledSpace SampledSpace::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("custom space JSON: ") + e.what());
  }
  if (!doc.contains("points") || !doc.contains("metric")) {
    throw std::invalid_argument("custom space JSON needs \"points\" and \"metric\"");
  }
  std::vector<std::string> labels;
  for (const auto& p : doc.at("points")) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  const std::size_t n = labels.size();
  std::vector<double> metric;
  metric.reserve(n * n);
  const auto& rows = doc.at("metric");
  if (!rows.is_array() || rows.size() != n) throw std::invalid_argument("metric must have one row per point");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) throw std::invalid_argument("metric rows must have one entry per point");
    for (const auto& v : row) metric.push_back(v.get<double>());
  }
  return custom(std::move(labels), std::move(metric));
}

SampledSpace SampledSpace::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open custom space file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::span<const std::uint8_t> SampledSpace::word(PointId p) const {
  if (kind_ != SpaceKind::symbolic) return {};
  return {words_.data() + static_cast<std::size_t>(p) * symbolic_.depth, symbolic_.depth};
}

PointId SampledSpace::word_index(std::span<const std::uint8_t> symbols) const {
  if (kind_ != SpaceKind::symbolic || symbols.size() != symbolic_.depth) {
    throw std::invalid_argument("word does not match the symbolic space depth");
  }
  std::size_t idx = 0;
  for (std::uint8_t s : symbols) {
    if (s >= symbolic_.alphabet_size) throw std::invalid_argument("symbol outside the alphabet");
    idx = idx * symbolic_.alphabet_size + s;
  }
  return static_cast<PointId>(idx);
}

std::string SampledSpace::label(PointId p) const {
  require_point(p);
  switch (kind_) {
    case SpaceKind::symbolic: {
      std::string out;
      for (std::uint8_t s : word(p)) {
        if (symbolic_.alphabet_size <= 10) {
          out.push_back(static_cast<char>('0' + s));
        } else {
          if (!out.empty()) out.push_back('.');
          out += std::to_string(s);
        }
      }
      return out;
    }
    case SpaceKind::custom:
      return labels_[p];
    default: {
      std::ostringstream os;
      os.imbue(std::locale::classic());
      os.precision(17);
      os << coords_[p];
      return os.str();
    }
  }
}

PointId SampledSpace::snap(double position) const {
  if (kind_ == SpaceKind::interval) {
    const double scaled = std::clamp(position, 0.0, 1.0) * static_cast<double>(size_ - 1);
    const double lower = std::floor(scaled);
    const double idx = (scaled - lower > 0.5) ? lower + 1.0 : lower;
    return static_cast<PointId>(std::min<double>(idx, static_cast<double>(size_ - 1)));
  }
  if (kind_ == SpaceKind::circle) {
    double t = position - std::floor(position);
    const double scaled = t * static_cast<double>(size_);
    const double lower = std::floor(scaled);
    const double idx = (scaled - lower > 0.5) ? lower + 1.0 : lower;
    const auto k = static_cast<std::size_t>(idx);
    return static_cast<PointId>(k % size_);
  }
  throw std::logic_error("snap is only defined on grid spaces");
}

void SampledSpace::require_point(PointId p) const {
  if (p >= size_) {
    throw std::out_of_range("point " + std::to_string(p) + " is not in a space of " + std::to_string(size_) +
                            " points");
  }
}

double SampledSpace::symbolic_distance(PointId a, PointId b) const {
  if (a == b) return 0.0;
  const std::size_t depth = symbolic_.depth;
  const std::uint8_t* wa = words_.data() + static_cast<std::size_t>(a) * depth;
  const std::uint8_t* wb = words_.data() + static_cast<std::size_t>(b) * depth;
  std::size_t j = 0;
  while (wa[j] == wb[j]) ++j;
  return std::ldexp(1.0, -static_cast<int>(j));
}

void SampledSpace::compute_diameter() {
  double diam = 0.0;
  for (PointId a = 0; a < size_; ++a)
    for (PointId b = a + 1; b < size_; ++b) diam = std::max(diam, distance(a, b));
  diameter_ = diam;
}

std::vector<PointId> epsilon_net(const SampledSpace& space, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon_net needs eps > 0");
  const std::size_t n = space.size();
  std::vector<PointId> net{0};
  std::vector<double> gap(n);
  for (PointId p = 0; p < n; ++p) gap[p] = space.distance(p, 0);
  for (;;) {
    PointId far = 0;
    double far_gap = -1.0;
    for (PointId p = 0; p < n; ++p) {
      if (gap[p] > far_gap) {
        far_gap = gap[p];
        far = p;
      }
    }
    if (far_gap <= eps) break;
    net.push_back(far);
    for (PointId p = 0; p < n; ++p) gap[p] = std::min(gap[p], space.distance(p, far));
  }
  return net;
}

}  // namespace nadsthermo
