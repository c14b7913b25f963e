#include "nadsthermo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nadsthermo/format.hpp"

namespace nadsthermo {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

void reject_unknown(const json& doc, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown " + where + " key '" + key + "'");
  }
}

SpaceKind parse_space_kind(const std::string& text) {
  if (text == "interval") return SpaceKind::interval;
  if (text == "circle") return SpaceKind::circle;
  if (text == "symbolic") return SpaceKind::symbolic;
  if (text == "custom") return SpaceKind::custom;
  throw std::invalid_argument("unknown space kind '" + text + "'");
}

SpaceSpec parse_space(const json& doc) {
  reject_unknown(doc, {"kind", "size", "alphabet", "depth", "path"}, "space");
  SpaceSpec spec;
  spec.kind = parse_space_kind(doc.at("kind").get<std::string>());
  switch (spec.kind) {
    case SpaceKind::interval:
    case SpaceKind::circle: spec.size = doc.at("size").get<std::size_t>(); break;
    case SpaceKind::symbolic:
      spec.symbolic.alphabet_size = doc.at("alphabet").get<std::size_t>();
      spec.symbolic.depth = doc.at("depth").get<std::size_t>();
      break;
    case SpaceKind::custom: spec.custom_path = doc.at("path").get<std::string>(); break;
  }
  return spec;
}

json space_json(const SpaceSpec& spec) {
  json j = {{"kind", to_string(spec.kind)}};
  switch (spec.kind) {
    case SpaceKind::interval:
    case SpaceKind::circle: j["size"] = spec.size; break;
    case SpaceKind::symbolic:
      j["alphabet"] = spec.symbolic.alphabet_size;
      j["depth"] = spec.symbolic.depth;
      break;
    case SpaceKind::custom: j["path"] = spec.custom_path; break;
  }
  return j;
}

Extrapolation parse_extrapolation(const std::string& text) {
  if (text == "growth_rate") return Extrapolation::growth_rate;
  if (text == "tail_max") return Extrapolation::tail_max;
  if (text == "growth_floor") return Extrapolation::growth_floor;
  throw std::invalid_argument("unknown extrapolation '" + text + "'");
}

bool is_custom_system(const std::string& system) {
  return system.size() > 5 && system.substr(system.size() - 5) == ".json";
}

double parse_real(const std::string& text, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad number in '" + context + "'");
  return v;
}

std::size_t parse_index(const std::string& text, const std::string& context) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("bad integer in '" + context + "'");
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<PressureMode> modes_of(const std::string& mode) {
  if (mode == "top") return {PressureMode::top};
  if (mode == "mis") return {PressureMode::mis};
  if (mode == "both") return {PressureMode::top, PressureMode::mis};
  throw std::invalid_argument("mode must be top, mis or both");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown(doc,
                 {"system", "space", "potentials", "schedule", "scales", "mode", "seed", "output_dir", "extrapolation",
                  "threads", "duality"},
                 "config");
  ExperimentConfig c;
  c.system = doc.at("system").get<std::string>();
  if (doc.contains("space")) c.space = parse_space(doc.at("space"));
  if (doc.contains("potentials")) c.potentials = doc.at("potentials").get<std::vector<std::string>>();
  c.schedule = doc.at("schedule").get<std::vector<std::size_t>>();
  c.scales = doc.at("scales").get<std::vector<double>>();
  c.mode = doc.value("mode", c.mode);
  c.seed = doc.value("seed", c.seed);
  c.output_dir = doc.value("output_dir", c.output_dir);
  if (doc.contains("extrapolation")) c.extrapolation = parse_extrapolation(doc.at("extrapolation").get<std::string>());
  c.threads = doc.value("threads", c.threads);
  if (doc.contains("duality")) {
    const json& d = doc.at("duality");
    reject_unknown(d, {"steps", "max_scaling", "bases", "candidates", "eta", "d_labels", "extrapolation"}, "duality");
    DualityConfig dc;
    dc.steps = d.value("steps", dc.steps);
    dc.max_scaling = d.value("max_scaling", dc.max_scaling);
    if (d.contains("bases")) dc.bases = d.at("bases").get<std::vector<std::string>>();
    if (d.contains("candidates")) dc.candidates = d.at("candidates").get<std::vector<std::string>>();
    dc.eta = d.value("eta", dc.eta);
    if (d.contains("d_labels")) dc.d_labels = d.at("d_labels").get<std::vector<std::string>>();
    if (d.contains("extrapolation")) dc.extrapolation = parse_extrapolation(d.at("extrapolation").get<std::string>());
    c.duality = dc;
  }
  if (c.system.empty()) throw std::invalid_argument("config needs a system");
  if (c.potentials.empty()) throw std::invalid_argument("config needs at least one potential");
  if (c.schedule.empty() || c.scales.empty()) throw std::invalid_argument("schedule and scales must be nonempty");
  modes_of(c.mode);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json j = {{"system", c.system},
            {"potentials", c.potentials},
            {"schedule", c.schedule},
            {"scales", c.scales},
            {"mode", c.mode},
            {"seed", c.seed},
            {"extrapolation", to_string(c.extrapolation)}};
  if (c.space) j["space"] = space_json(*c.space);
  if (c.duality) {
    j["duality"] = {{"steps", c.duality->steps},
                    {"max_scaling", c.duality->max_scaling},
                    {"bases", c.duality->bases},
                    {"candidates", c.duality->candidates},
                    {"eta", c.duality->eta},
                    {"d_labels", c.duality->d_labels},
                    {"extrapolation", to_string(c.duality->extrapolation)}};
  }
  return j;
}

Potential resolve_potential(const std::string& key, const SampledSpace& space, std::uint64_t seed) {
  if (starts_with(key, "lipschitz-random:") && key.find(',') == std::string::npos) {
    Potential phi = make_potential("lipschitz-random:" + std::to_string(seed) + "," + key.substr(17), space);
    phi.label = key;
    return phi;
  }
  return make_potential(key, space);
}

MapSequence resolve_system(const ExperimentConfig& config) {
  if (is_custom_system(config.system)) {
    if (config.space) throw std::invalid_argument("custom systems carry their own space");
    return load_custom_system(config.system);
  }
  const SpaceSpec spec = config.space.value_or(default_space_for(config.system));
  auto space = std::make_shared<const SampledSpace>(build_space(spec));
  return make_system(config.system, std::move(space));
}

Measure resolve_measure(const std::string& key, const MapSequence& seq) {
  const SampledSpace& space = seq.space();
  if (key == "uniform") return Measure::uniform(space.size());
  if (starts_with(key, "dirac:")) {
    const auto p = static_cast<PointId>(parse_index(key.substr(6), key));
    space.require_point(p);
    return Measure::dirac(space.size(), p, key);
  }
  if (starts_with(key, "dirac@")) {
    if (space.kind() != SpaceKind::interval && space.kind() != SpaceKind::circle)
      throw std::invalid_argument("dirac@x needs a grid space");
    return Measure::dirac(space.size(), space.snap(parse_real(key.substr(6), key)), key);
  }
  if (starts_with(key, "orbit:")) {
    const std::string rest = key.substr(6);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("orbit measure needs 'orbit:k,n'");
    const auto x = static_cast<PointId>(parse_index(rest.substr(0, comma), key));
    space.require_point(x);
    Measure mu = Measure::empirical(seq, x, parse_index(rest.substr(comma + 1), key));
    mu.set_label(key);
    return mu;
  }
  throw std::invalid_argument("unknown candidate measure '" + key + "'");
}

Artifacts run_estimate(const ExperimentConfig& config) {
  const MapSequence seq = resolve_system(config);
  EstimateOptions options;
  options.extrapolation = config.extrapolation;
  options.threads = config.threads;
  std::ostringstream csv;
  csv << "mode,potential_label,n,scale,value,log_sum,set_size\n";
  json estimates = json::array();
  for (PressureMode mode : modes_of(config.mode)) {
    for (const auto& key : config.potentials) {
      const Potential phi = resolve_potential(key, seq.space(), config.seed);
      const PressureEstimate est = pressure_estimate(seq, phi, config.schedule, config.scales, mode, options);
      for (const auto& s : est.samples) {
        csv << to_string(mode) << ',' << csv_field(phi.label) << ',' << s.n << ',' << format_number(s.scale) << ','
            << format_number(s.value) << ',' << format_number(s.log_sum) << ',' << s.set_size << '\n';
      }
      json limsup = json::array(), diag = json::array();
      for (const auto& ps : est.per_scale) {
        limsup.push_back({{"scale", ps.scale}, {"value", ps.tail_max}});
        diag.push_back({{"scale", ps.scale},
                        {"growth_rate", ps.growth_rate},
                        {"fit_intercept", ps.fit_intercept},
                        {"fit_slope", ps.fit_slope},
                        {"fit_r2", ps.fit_r2},
                        {"orbit_floor", ps.orbit_floor},
                        {"tail_points", ps.tail_points},
                        {"fit_points", ps.fit_points}});
      }
      estimates.push_back({{"mode", to_string(mode)},
                           {"potential_label", phi.label},
                           {"extrapolation", to_string(est.extrapolation)},
                           {"extrapolated", est.extrapolated},
                           {"per_eps_limsup", std::move(limsup)},
                           {"slope_diag", std::move(diag)},
                           {"warnings", est.warnings}});
    }
  }
  json summary = {{"system", seq.label()},
                  {"points", seq.space().size()},
                  {"space_kind", to_string(seq.space().kind())},
                  {"config", to_json(config)},
                  {"estimates", std::move(estimates)}};
  return {{"samples.csv", csv.str()}, {"summary.json", dump(summary)}};
}

Artifacts run_duality(const ExperimentConfig& config) {
  if (!config.duality) throw std::invalid_argument("config has no duality block");
  const DualityConfig& dc = *config.duality;
  const MapSequence seq = resolve_system(config);
  const SampledSpace& space = seq.space();

  std::vector<Potential> bases;
  const auto& base_keys = dc.bases.empty() ? config.potentials : dc.bases;
  for (const auto& key : base_keys) bases.push_back(resolve_potential(key, space, config.seed));
  ClosureParams closure;
  closure.steps = dc.steps;
  closure.max_scaling = dc.max_scaling;
  const PotentialDictionary dictionary = PotentialDictionary::closure(seq, bases, closure);

  const InvariantSearch search = find_common_invariant(seq, dc.steps);
  std::vector<Measure> candidates;
  for (const auto& key : dc.candidates) {
    if (key == "invariant") {
      if (search.feasible) candidates.push_back(search.measure);
    } else {
      candidates.push_back(resolve_measure(key, seq));
    }
  }
  // Split candidates by their defect against the base potentials.
  std::vector<Potential> test = dictionary.bases();
  if (test.empty()) test.push_back(zero_potential(space));
  ReportOptions ropt;
  ropt.steps = dc.steps;
  ropt.max_scaling = dc.max_scaling;
  ropt.eta = dc.eta;
  ropt.d_labels = dc.d_labels;
  std::vector<Measure> invariant, non_invariant;
  for (const Measure& mu : candidates) {
    if (invariance_defect(seq, mu, test, dc.steps) <= ropt.defect_threshold) {
      invariant.push_back(mu);
    } else {
      non_invariant.push_back(mu);
    }
  }
  if (!search.feasible) invariant.clear();

  EstimateOptions options;
  options.extrapolation = dc.extrapolation;
  options.threads = config.threads;
  json gamma_doc = json::object(), report_doc = json::object();
  std::ostringstream entropy_csv;
  entropy_csv << "mode,measure,entropy_dict,argmin\n";
  std::map<std::string, std::vector<double>> per_mode;
  for (PressureMode mode : modes_of(config.mode)) {
    const GammaTable gamma = build_gamma_table(seq, dictionary, config.schedule, config.scales, mode, options);
    gamma_doc[to_string(mode)] = to_json(gamma);
    for (const Measure& mu : candidates) {
      const EntropyValue h = entropy_dict(gamma, mu);
      entropy_csv << to_string(mode) << ',' << csv_field(mu.label()) << ',' << format_number(h.value) << ','
                  << csv_field(h.argmin) << '\n';
      per_mode[to_string(mode)].push_back(h.value);
    }
    const DualityReport report = duality_report(seq, gamma, invariant, non_invariant, candidates, std::nullopt, ropt);
    report_doc[to_string(mode)] = to_json(report, gamma);
  }
  json certificate = {{"feasible", search.feasible},
                      {"method", search.method},
                      {"residual", search.residual},
                      {"maps", search.maps}};
  report_doc["invariant_search"] = certificate;
  report_doc["invariant_set"] = json::array();
  for (const Measure& mu : invariant) report_doc["invariant_set"].push_back(mu.label());
  report_doc["invariant_set_empty"] = invariant.empty();
  if (per_mode.size() == 2) {
    double worst = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k)
      worst = std::max(worst, std::abs(per_mode["top"][k] - per_mode["mis"][k]));
    report_doc["mode_comparison"] = {{"max_entropy_dict_difference", worst}, {"tolerance", 0.2}, {"pass", worst <= 0.2}};
  }
  return {{"gamma.json", dump(gamma_doc)},
          {"entropy_map.csv", entropy_csv.str()},
          {"theoremB_report.json", dump(report_doc)}};
}

void write_artifacts(const std::string& dir, const Artifacts& artifacts) {
  const fs::path root(dir);
  const bool existed = fs::exists(root);
  std::vector<fs::path> written;
  try {
    fs::create_directories(root);
    for (const auto& [name, content] : artifacts) {
      const fs::path path = root / name;
      written.push_back(path);
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw std::runtime_error("failed writing " + path.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    if (!existed) fs::remove(root, ec);
    throw;
  }
}

}  // namespace nadsthermo
