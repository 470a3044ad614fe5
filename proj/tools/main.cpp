#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hybridlfc/error.hpp"
#include "hybridlfc/experiments.hpp"

int main(int argc, char** argv) {
  using namespace hybridlfc;

  CLI::App app{"Load-frequency control simulation and PSO tuning for a hybrid microgrid"};
  app.set_version_flag("--version", "hybridlfc 0.1.0");

  std::string command;
  std::string controller = "pid";
  std::string rng = "uniform";
  std::string scenario;
  std::string params;
  std::string out = "out";
  std::uint64_t seed = 0;
  int realizations = 0;
  std::vector<std::string> off;

  app.add_option("command", command, "tune | simulate | robustness-uc | robustness-disconnect | "
                                     "rate-limit | report")
      ->required()
      ->check(CLI::IsMember({"tune", "simulate", "robustness-uc", "robustness-disconnect",
                             "rate-limit", "report"}));
  app.add_option("--controller", controller, "Controller structure")
      ->check(CLI::IsMember({"pid", "fpid", "fofpid"}))
      ->capture_default_str();
  app.add_option("--rng", rng, "PSO random source")
      ->check(CLI::IsMember({"uniform", "logistic", "henon"}))
      ->capture_default_str();
  app.add_option("--scenario", scenario, "Scenario file (built-in nominal scenario if omitted)")
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the scenario)");
  auto* real_opt = app.add_option("--realizations", realizations, "Noise realizations per evaluation")
                       ->check(CLI::PositiveNumber);
  app.add_option("--params", params, "Controller parameter file")->check(CLI::ExistingFile);
  app.add_option("--disconnect", off, "Components to switch off, e.g. fess bess");
  app.add_option("--out", out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentSpec spec;
    spec.command = parse_command(command);
    spec.controller = parse_controller_tag(controller);
    spec.rng = parse_random_source(rng);
    spec.scenario = scenario;
    if (*seed_opt) spec.seed = seed;
    if (*real_opt) spec.realizations = realizations;
    if (!params.empty()) spec.params = params;
    for (const auto& name : off) spec.disconnected.push_back(parse_component(name));
    spec.out = out;
    for (const auto& path : run_experiment(spec)) std::cout << path.string() << "\n";
  } catch (const Error& e) {
    std::cerr << fmt::format("hybridlfc: error [{}]: {}\n", error_code_name(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("hybridlfc: error: {}\n", e.what());
    return 1;
  }
  return 0;
}
