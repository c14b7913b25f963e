#include "nadsthermo/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nadsthermo {

namespace {

constexpr std::size_t kDefaultGrid = 1025;

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw std::invalid_argument("bad number '" + text + "' in " + context);
  }
  return value;
}

long long parse_integer(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  long long value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw std::invalid_argument("bad integer '" + text + "' in " + context);
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string parameter(const std::string& key, const std::string& name) {
  return key.substr(name.size() + 1);
}

void require_kind(const SampledSpace& space, SpaceKind kind, const std::string& key) {
  if (space.kind() != kind) {
    throw std::invalid_argument("system '" + key + "' needs a " + to_string(kind) + " space, got " +
                                to_string(space.kind()));
  }
}

double arc(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

template <typename F>
StepMap snapped_map(const SampledSpace& space, F f, double* snap_error) {
  StepMap map(space.size());
  double worst = 0.0;
  for (PointId p = 0; p < space.size(); ++p) {
    const double image = f(space.coord(p));
    map[p] = space.snap(image);
    const double err = space.kind() == SpaceKind::circle ? arc(image, space.coord(map[p]))
                                                          : std::abs(std::clamp(image, 0.0, 1.0) - space.coord(map[p]));
    worst = std::max(worst, err);
  }
  if (snap_error) *snap_error = std::max(*snap_error, worst);
  return map;
}

StepMap multiply_map(const SampledSpace& space, long long factor, const std::string& key) {
  require_kind(space, SpaceKind::circle, key);
  if (factor < 1) throw std::invalid_argument("multiplier must be a positive integer in '" + key + "'");
  const std::size_t n = space.size();
  StepMap map(n);
  for (std::size_t k = 0; k < n; ++k) map[k] = static_cast<PointId>((k * static_cast<std::size_t>(factor)) % n);
  return map;
}

// Circle diffeomorphism with a repelling fixed point p and an attracting fixed
// point q; each open arc between them is pushed toward q. Derivative 1 +/- c at
// the fixed points, so c in (0, 1) keeps it a diffeomorphism.
double north_south(double t, double p, double q) {
  constexpr double c = 0.5;
  const double arc_pq = q - p - std::floor(q - p);  // ccw length from p to q
  const double arc_qp = 1.0 - arc_pq;
  const double from_p = t - p - std::floor(t - p);
  if (from_p < arc_pq) {
    const double u = from_p / arc_pq;
    return t + c * arc_pq * std::sin(std::numbers::pi * u) / std::numbers::pi;
  }
  const double v = (from_p - arc_pq) / arc_qp;
  return t - c * arc_qp * std::sin(std::numbers::pi * v) / std::numbers::pi;
}

}  // namespace

SampledSpace build_space(const SpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::interval: return SampledSpace::interval(spec.size);
    case SpaceKind::circle: return SampledSpace::circle(spec.size);
    case SpaceKind::symbolic: return SampledSpace::symbolic(spec.symbolic);
    case SpaceKind::custom: return SampledSpace::from_json_file(spec.custom_path);
  }
  throw std::invalid_argument("unknown space kind");
}

std::vector<CatalogInfo> system_catalog() {
  return {
      {"identity", "any", "f_n = id for every n"},
      {"doubling", "circle", "t -> 2t mod 1 (exact on grids)"},
      {"tripling", "circle", "t -> 3t mod 1 (exact on grids)"},
      {"multiply:k", "circle", "t -> k t mod 1 (exact on grids)"},
      {"rotation:a", "circle", "t -> t + a mod 1"},
      {"tent", "interval", "t -> 1 - |2t - 1|"},
      {"logistic:r", "interval", "t -> r t (1 - t), 0 <= r <= 4"},
      {"shift:m", "symbolic", "full shift on m symbols; drops the first symbol, appends 0"},
      {"northsouth:p,q", "circle", "circle diffeomorphism with source p and sink q"},
      {"periodic:[k1,k2,...]", "per entry", "applies the listed systems cyclically"},
  };
}

std::vector<CatalogInfo> potential_catalog() {
  return {
      {"zero", "any", "phi = 0"},
      {"coord", "any", "coordinate of the point (word value sum x_j m^-(j+1) on symbolic spaces)"},
      {"const:c", "any", "phi = c"},
      {"cos:k", "any", "cos(2 pi k t) of the coordinate"},
      {"sin:k", "any", "sin(2 pi k t) of the coordinate"},
      {"first-symbol:[a,b,...]", "symbolic", "phi(x) = value of the first symbol"},
      {"lipschitz-random:seed,L", "any", "random L-Lipschitz potential"},
  };
}

SpaceSpec default_space_for(const std::string& key) {
  SpaceSpec spec;
  if (starts_with(key, "shift:")) {
    const auto m = parse_integer(parameter(key, "shift"), key);
    if (m < 2) throw std::invalid_argument("shift needs at least 2 symbols");
    spec.kind = SpaceKind::symbolic;
    spec.symbolic.alphabet_size = static_cast<std::size_t>(m);
    std::size_t depth = 1;
    std::size_t count = static_cast<std::size_t>(m);
    while (count * static_cast<std::size_t>(m) <= 4096) {
      count *= static_cast<std::size_t>(m);
      ++depth;
    }
    spec.symbolic.depth = depth;
    return spec;
  }
  if (key == "tent" || starts_with(key, "logistic:")) {
    spec.kind = SpaceKind::interval;
    spec.size = kDefaultGrid;
    return spec;
  }
  if (starts_with(key, "periodic:[")) {
    const std::string inner = key.substr(10, key.size() - 11);
    const auto entries = split_periodic_entries(inner);
    if (!entries.empty()) return default_space_for(entries.front());
  }
  spec.kind = SpaceKind::circle;
  spec.size = kDefaultGrid;
  return spec;
}

StepMap make_step_map(const std::string& key, const SampledSpace& space, double* snap_error) {
  if (key == "identity") {
    StepMap map(space.size());
    for (PointId p = 0; p < space.size(); ++p) map[p] = p;
    return map;
  }
  if (key == "doubling") return multiply_map(space, 2, key);
  if (key == "tripling") return multiply_map(space, 3, key);
  if (starts_with(key, "multiply:")) return multiply_map(space, parse_integer(parameter(key, "multiply"), key), key);
  if (starts_with(key, "rotation:")) {
    require_kind(space, SpaceKind::circle, key);
    const double alpha = parse_real(parameter(key, "rotation"), key);
    return snapped_map(space, [alpha](double t) { return t + alpha; }, snap_error);
  }
  if (key == "tent") {
    require_kind(space, SpaceKind::interval, key);
    return snapped_map(space, [](double t) { return 1.0 - std::abs(2.0 * t - 1.0); }, snap_error);
  }
  if (starts_with(key, "logistic:")) {
    require_kind(space, SpaceKind::interval, key);
    const double r = parse_real(parameter(key, "logistic"), key);
    if (r < 0.0 || r > 4.0) throw std::invalid_argument("logistic parameter must lie in [0, 4]");
    return snapped_map(space, [r](double t) { return r * t * (1.0 - t); }, snap_error);
  }
  if (starts_with(key, "shift:")) {
    require_kind(space, SpaceKind::symbolic, key);
    const auto m = parse_integer(parameter(key, "shift"), key);
    if (m < 2 || static_cast<std::size_t>(m) != space.symbolic_params().alphabet_size) {
      throw std::invalid_argument("'" + key + "' does not match the alphabet of the symbolic space");
    }
    const std::size_t depth = space.symbolic_params().depth;
    StepMap map(space.size());
    std::vector<std::uint8_t> buf(depth);
    for (PointId p = 0; p < space.size(); ++p) {
      const auto w = space.word(p);
      std::copy(w.begin() + 1, w.end(), buf.begin());
      buf[depth - 1] = 0;
      map[p] = space.word_index(buf);
    }
    return map;
  }
  if (starts_with(key, "northsouth:")) {
    require_kind(space, SpaceKind::circle, key);
    const auto parts = split(parameter(key, "northsouth"), ',');
    if (parts.size() != 2) throw std::invalid_argument("northsouth needs 'p,q'");
    const double p = parse_real(parts[0], key);
    const double q = parse_real(parts[1], key);
    if (arc(p, q) <= 0.0) throw std::invalid_argument("northsouth source and sink must differ");
    StepMap map = snapped_map(space, [p, q](double t) { return north_south(t, p, q); }, snap_error);
    // Snapping stalls points within half a mesh of their image; push those one
    // cell along the flow so only the snapped p and q stay fixed.
    const PointId source = space.snap(p);
    const PointId sink = space.snap(q);
    const std::size_t n = space.size();
    for (PointId k = 0; k < n; ++k) {
      if (map[k] != k || k == source || k == sink) continue;
      const double t = space.coord(k);
      const double shift = north_south(t, p, q) - t;
      map[k] = static_cast<PointId>(shift > 0.0 ? (k + 1) % n : (k + n - 1) % n);
    }
    return map;
  }
  throw std::invalid_argument("unknown catalog key '" + key + "'");
}

std::vector<std::string> split_periodic_entries(const std::string& inner) {
  std::vector<std::string> entries;
  for (const std::string& raw : split(inner, ',')) {
    const std::string token = trim(raw);
    if (token.empty()) throw std::invalid_argument("empty entry in periodic system list");
    const char c = token.front();
    const bool numeric = std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
    if (numeric && !entries.empty()) {
      entries.back() += "," + token;
    } else {
      entries.push_back(token);
    }
  }
  return entries;
}

MapSequence make_system(const std::string& key, std::shared_ptr<const SampledSpace> space) {
  if (!space) throw std::invalid_argument("make_system needs a space");
  double snap_error = 0.0;
  if (starts_with(key, "periodic:")) {
    if (key.size() < 12 || key[9] != '[' || key.back() != ']') {
      throw std::invalid_argument("periodic systems are written periodic:[k1,k2,...]");
    }
    const auto entries = split_periodic_entries(key.substr(10, key.size() - 11));
    std::vector<StepMap> maps;
    for (const auto& entry : entries) {
      if (starts_with(entry, "periodic:")) throw std::invalid_argument("nested periodic systems are not supported");
      maps.push_back(make_step_map(entry, *space, &snap_error));
    }
    return MapSequence::cyclic(std::move(space), std::move(maps), key, snap_error);
  }
  StepMap map = make_step_map(key, *space, &snap_error);
  return MapSequence::cyclic(std::move(space), {std::move(map)}, key, snap_error);
}

MapSequence load_custom_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open custom system file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("custom system JSON: ") + e.what());
  }
  auto space = std::make_shared<const SampledSpace>(SampledSpace::from_json_text(buf.str()));
  if (!doc.contains("maps") || !doc.at("maps").is_array() || doc.at("maps").empty()) {
    throw std::invalid_argument("custom system needs a nonempty \"maps\" list");
  }
  std::vector<StepMap> maps;
  for (const auto& m : doc.at("maps")) {
    StepMap map;
    for (const auto& v : m) {
      const auto idx = v.get<long long>();
      if (idx < 0) throw std::invalid_argument("custom map entries must be point indices");
      map.push_back(static_cast<PointId>(idx));
    }
    maps.push_back(std::move(map));
  }
  const std::string label = doc.value("label", path);
  return MapSequence::cyclic(std::move(space), std::move(maps), label);
}

namespace {
Potential make_potential_unlabeled(const std::string& key, const SampledSpace& space) {
  if (key == "zero") return zero_potential(space);
  if (key == "coord") return coord_potential(space);
  if (starts_with(key, "const:")) return constant_potential(space, parse_real(parameter(key, "const"), key));
  if (starts_with(key, "cos:")) return cosine_potential(space, static_cast<int>(parse_integer(parameter(key, "cos"), key)));
  if (starts_with(key, "sin:")) return sine_potential(space, static_cast<int>(parse_integer(parameter(key, "sin"), key)));
  if (starts_with(key, "first-symbol:")) {
    std::string inner = parameter(key, "first-symbol");
    if (inner.size() < 2 || inner.front() != '[' || inner.back() != ']') {
      throw std::invalid_argument("first-symbol potentials are written first-symbol:[a,b,...]");
    }
    std::vector<double> values;
    for (const auto& part : split(inner.substr(1, inner.size() - 2), ',')) values.push_back(parse_real(part, key));
    return first_symbol_potential(space, values);
  }
  if (starts_with(key, "lipschitz-random:")) {
    const auto parts = split(parameter(key, "lipschitz-random"), ',');
    if (parts.size() != 2) throw std::invalid_argument("lipschitz-random needs 'seed,L'");
    const auto seed = parse_integer(parts[0], key);
    if (seed < 0) throw std::invalid_argument("lipschitz-random seed must be nonnegative");
    return lipschitz_random_potential(space, static_cast<std::uint64_t>(seed), parse_real(parts[1], key));
  }
  throw std::invalid_argument("unknown potential key '" + key + "'");
}
}  // namespace

Potential make_potential(const std::string& key, const SampledSpace& space) {
  Potential phi = make_potential_unlabeled(trim(key), space);
  phi.label = trim(key);
  return phi;
}

}  // namespace nadsthermo
