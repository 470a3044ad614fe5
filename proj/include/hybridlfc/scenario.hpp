#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridlfc/controllers.hpp"
#include "hybridlfc/pso.hpp"
#include "hybridlfc/sim.hpp"

namespace hybridlfc {

/// Search box for PSO tuning: gains and scaling factors share one range,
/// fractional orders another.
struct SearchBounds {
  double gain_low = 0.0;
  double gain_high = 30.0;
  double order_low = 0.05;
  double order_high = 1.0;

  Bounds for_controller(ControllerKind kind) const;
};

/// Everything a scenario file can hold.
struct Scenario {
  ScenarioConfig sim;
  SwarmConfig swarm;
  SearchBounds bounds;
  /// Controller parameter sets keyed by controller (optional sections).
  std::map<ControllerKind, ControllerParams> controllers;
  /// Slew limits activated by the rate-limit experiment.
  std::map<Component, double> rate_limits{{Component::Fess, 0.02},
                                          {Component::Bess, 0.005},
                                          {Component::Uc, 1.2},
                                          {Component::Deg, 0.001}};

  void validate() const;
};

/// Nominal scenario: component table, profiles, u_ss and the reference
/// controller settings.
Scenario default_scenario();

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string render_scenario(const Scenario& scenario);

/// Flat key = value parameter file: `controller = <tag>` plus one key per
/// parameter. Extra keys are ignored on load.
ControllerParams parse_params(const std::string& text);
ControllerParams load_params(const std::filesystem::path& path);
std::string render_params(const ControllerParams& params,
                          const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Flat key = value map (metrics files, params files).
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest representation that parses back to the same double.
std::string format_number(double v);
double parse_number(const std::string& s);

}  // namespace hybridlfc
