#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nadsthermo/experiment.hpp"

using namespace nadsthermo;

namespace {

struct Overrides {
  std::string config;
  std::string mode;
  std::string out;
  std::string extrapolation;
  std::int64_t seed = -1;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", o.mode, "top, mis or both")->check(CLI::IsMember({"top", "mis", "both"}));
  cmd->add_option("--seed", o.seed, "seed for randomized potentials")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--extrapolation", o.extrapolation, "growth_rate, tail_max or growth_floor")
      ->check(CLI::IsMember({"growth_rate", "tail_max", "growth_floor"}));
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

ExperimentConfig resolve(const Overrides& o) {
  nlohmann::json doc;
  {
    std::ifstream in(o.config);
    doc = nlohmann::json::parse(in);
  }
  if (!o.mode.empty()) doc["mode"] = o.mode;
  if (o.seed >= 0) doc["seed"] = o.seed;
  if (!o.out.empty()) doc["output_dir"] = o.out;
  if (!o.extrapolation.empty()) {
    doc["extrapolation"] = o.extrapolation;
    if (doc.contains("duality")) doc["duality"]["extrapolation"] = o.extrapolation;
  }
  if (o.threads) doc["threads"] = o.threads;
  return parse_config(doc);
}

void print_catalog() {
  std::cout << "systems\n";
  for (const auto& c : system_catalog()) std::cout << "  " << c.key << "  [" << c.spaces << "]  " << c.description << '\n';
  std::cout << "potentials\n";
  for (const auto& c : potential_catalog()) std::cout << "  " << c.key << "  [" << c.spaces << "]  " << c.description << '\n';
  std::cout << "measures\n"
            << "  uniform, invariant, dirac:k, dirac@x, orbit:k,n\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pressure, entropy and duality estimates for nonautonomous systems on sampled spaces"};
  app.require_subcommand(1);
  Overrides est, dual, rep;
  auto* estimate = app.add_subcommand("estimate", "pressure curves: samples.csv and summary.json");
  add_common(estimate, est);
  auto* duality = app.add_subcommand("duality", "gamma.json, entropy_map.csv and theoremB_report.json");
  add_common(duality, dual);
  auto* report = app.add_subcommand("report", "estimate and duality artifacts in one run");
  add_common(report, rep);
  app.add_subcommand("catalog", "list built-in systems, potentials and measures");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("catalog")) {
      print_catalog();
      return 0;
    }
    Artifacts artifacts;
    ExperimentConfig config;
    if (app.got_subcommand(estimate)) {
      config = resolve(est);
      artifacts = run_estimate(config);
    } else if (app.got_subcommand(duality)) {
      config = resolve(dual);
      artifacts = run_duality(config);
    } else {
      config = resolve(rep);
      artifacts = run_estimate(config);
      if (config.duality) artifacts.merge(run_duality(config));
    }
    write_artifacts(config.output_dir, artifacts);
    for (const auto& [name, content] : artifacts) std::cout << config.output_dir << '/' << name << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "nads-thermo: " << e.what() << '\n';
    return 2;
  }
}
