#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hybridlfc/controllers.hpp"
#include "hybridlfc/plant.hpp"
#include "hybridlfc/stochastic.hpp"

namespace hybridlfc {

struct ObjectiveWeights {
  double frequency = 1.0;  // w1
  double control = 1.0;    // w2
};

struct ScenarioConfig {
  PlantConfig plant;
  ProfileSpec wind = make_wind();
  ProfileSpec solar = make_solar();
  ProfileSpec load = make_load();
  ControllerOptions controller;

  double t_max = 120.0;
  double step = 0.01;
  /// Expected steady control u_ss(t).
  SwitchingSchedule u_ss{{0.0, 0.81}, {40.0, 0.17}, {80.0, 1.12}};
  ObjectiveWeights weights;
  /// Controller input is e = error_sign * df.
  double error_sign = -1.0;

  std::uint64_t seed = 1;
  int realizations = 4;

  std::size_t steps() const;
  void validate() const;
};

struct Metrics {
  double ise = 0.0;
  double isdco = 0.0;
  double j = 0.0;
};

struct SimResult {
  std::vector<double> t;
  std::vector<double> df;
  std::vector<double> u;
  std::vector<double> p_wtg, p_stpg, p_fc1, p_fc2, p_deg, p_fess, p_bess, p_uc, p_load;
  Metrics metrics;
  bool diverged = false;
};

struct RunOptions {
  /// Record per-component power series (t, df and u are always kept).
  bool record_powers = true;
};

/// Integrates plant, profile filters and controller over [0, t_max] with the
/// Bogacki-Shampine scheme; the noise samples are held over each step.
/// A non-finite state marks the run diverged with all metrics = +inf.
SimResult run_closed_loop(const ScenarioConfig& cfg, const ControllerParams& params,
                          std::uint64_t seed, std::uint64_t realization = 0,
                          const RunOptions& options = {});

/// Trapezoid-rule ISE / ISDCO on the sample grid, J = w1 ISE + w2 ISDCO.
Metrics compute_metrics(std::span<const double> t, std::span<const double> df,
                        std::span<const double> u, std::span<const SwitchTerm> u_ss,
                        const ObjectiveWeights& weights = {});

/// |nominal - perturbed| / nominal * 100.
double performance_decrease(double nominal, double perturbed);

/// Mean metrics over realizations 0..R-1 of `seed`; any divergence -> +inf.
Metrics ensemble_metrics(const ScenarioConfig& cfg, const ControllerParams& params, int realizations,
                         std::uint64_t seed);
double ensemble_objective(const ScenarioConfig& cfg, const ControllerParams& params,
                          int realizations, std::uint64_t seed);

/// Deterministic child seed, e.g. one per optimizer generation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace hybridlfc
