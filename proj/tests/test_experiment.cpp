#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "nadsthermo/experiment.hpp"

using namespace nadsthermo;
using nlohmann::json;

namespace {

ExperimentConfig base_config(const std::string& system) {
  return parse_config(json{{"system", system}, {"schedule", {2, 3, 4, 5, 6, 7, 8}}, {"scales", {0.25}}});
}

double first_extrapolated(const Artifacts& a) {
  return json::parse(a.at("summary.json"))["estimates"][0]["extrapolated"].get<double>();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(json::parse(R"({
    "system": "doubling", "space": {"kind": "circle", "size": 65},
    "potentials": ["zero", "coord"], "schedule": [2, 4], "scales": [0.3, 0.1],
    "mode": "both", "seed": 5, "output_dir": "x",
    "duality": {"steps": 2, "max_scaling": 8, "candidates": ["uniform", "dirac@0.25"]}
  })"));
  CHECK(c.space->size == 65);
  CHECK(c.mode == "both");
  CHECK(c.duality->steps == 2);
  CHECK(modes_of(c.mode).size() == 2);
  CHECK(parse_config(to_json(c)).potentials == c.potentials);
  CHECK_THROWS(parse_config(json{{"system", "doubling"}, {"schedule", {2}}, {"scales", {0.1}}, {"bogus", 1}}));
  CHECK_THROWS(parse_config(json{{"system", "doubling"}, {"schedule", {2}}, {"scales", {0.1}}, {"mode", "x"}}));
  CHECK_THROWS(parse_config(json{{"system", "doubling"}, {"scales", {0.1}}}));
}

TEST_CASE("identity gives zero and the shift gives log 2") {
  CHECK(first_extrapolated(run_estimate(base_config("identity"))) == 0.0);
  auto c = base_config("shift:2");
  c.space = SpaceSpec{SpaceKind::symbolic, 0, {2, 12}, {}};
  CHECK(std::abs(first_extrapolated(run_estimate(c)) - std::numbers::ln2) <= 0.05);
}

TEST_CASE("samples.csv rows trace the summary") {
  auto c = base_config("doubling");
  c.potentials = {"zero", "mix-free", "coord"};
  CHECK_THROWS(run_estimate(c));
  c.potentials = {"coord", "first-symbol:[0,1]"};
  CHECK_THROWS(run_estimate(c));  // first-symbol needs a symbolic space
  c.potentials = {"coord", "lipschitz-random:2"};
  const auto a = run_estimate(c);
  std::istringstream csv(a.at("samples.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "mode,potential_label,n,scale,value,log_sum,set_size");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 14);
  const auto summary = json::parse(a.at("summary.json"));
  CHECK(summary["estimates"][1]["potential_label"] == "lipschitz-random:2");
}

TEST_CASE("seeded potentials follow the seed") {
  auto c = base_config("doubling");
  c.potentials = {"lipschitz-random:2"};
  c.seed = 1;
  const auto a = run_estimate(c);
  c.seed = 2;
  CHECK(run_estimate(c).at("samples.csv") != a.at("samples.csv"));
  c.seed = 1;
  CHECK(run_estimate(c).at("samples.csv") == a.at("samples.csv"));
}

TEST_CASE("north-south pair records an empty invariant set") {
  auto c = parse_config(json::parse(R"({
    "system": "periodic:[northsouth:0.1,0.6,northsouth:0.35,0.85]",
    "space": {"kind": "circle", "size": 101},
    "schedule": [2, 3, 4, 5], "scales": [0.25],
    "duality": {"steps": 2, "max_scaling": 8, "bases": ["cos:1"], "candidates": ["uniform", "invariant", "dirac:10"]}
  })"));
  const auto a = run_duality(c);
  const auto report = json::parse(a.at("theoremB_report.json"));
  CHECK(report["invariant_set_empty"] == true);
  CHECK(report["invariant_search"]["feasible"] == false);
  CHECK(report["top"]["items"][2]["skipped"] == true);
  CHECK(a.count("gamma.json"));
  CHECK(a.count("entropy_map.csv"));
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("mix(a,b,0.5)") == "\"mix(a,b,0.5)\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("artifact writing") {
  const auto dir = std::filesystem::temp_directory_path() / "nads_thermo_artifacts_test";
  std::filesystem::remove_all(dir);
  write_artifacts(dir.string(), {{"a.txt", "1\n"}, {"b.txt", "2\n"}});
  std::ifstream in(dir / "b.txt");
  std::string s;
  std::getline(in, s);
  CHECK(s == "2");
  // A name that cannot be created rolls back everything written in this call.
  const auto fresh = dir / "fresh";
  CHECK_THROWS(write_artifacts(fresh.string(), {{"a.txt", "1"}, {"missing/sub/c.txt", "3"}}));
  CHECK_FALSE(std::filesystem::exists(fresh));
  std::filesystem::remove_all(dir);
}
