#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hybridlfc/controllers.hpp"
#include "hybridlfc/pso.hpp"
#include "hybridlfc/scenario.hpp"

namespace hybridlfc {

enum class Command { Tune, Simulate, RobustnessUc, RobustnessDisconnect, RateLimit, Report };

std::string_view command_name(Command c);
Command parse_command(std::string_view name);

struct ExperimentSpec {
  Command command = Command::Simulate;
  ControllerKind controller = ControllerKind::Pid;
  RandomSource rng = RandomSource::Uniform;
  /// Empty path selects the built-in nominal scenario.
  std::filesystem::path scenario;
  /// Overrides the scenario seed / realization count when set.
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  /// Parameter file for the evaluation commands; defaults to the scenario's
  /// controller section.
  std::optional<std::filesystem::path> params;
  /// Components switched off on top of the scenario file.
  std::vector<Component> disconnected;
  std::filesystem::path out = "out";
};

/// CSV table with a fixed column set. Cells hold text; numbers are written
/// in shortest round-trip form so a table parses back losslessly.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view col) const;
  bool operator==(const Table&) const = default;
};

/// `# ` prefixed comment lines, then header, then rows.
std::string render_csv(const Table& table, const std::vector<std::string>& comments = {});
/// Skips comment lines; throws Config on ragged rows.
Table parse_csv(const std::string& text);

struct TuneOutcome {
  ControllerParams params;
  double j_min = 0.0;
  std::vector<TraceRow> trace;
};

/// PSO over the ensemble objective; generation k evaluates every particle on
/// realizations of derive_seed(seed, k).
TuneOutcome tune_controller(const Scenario& scenario, ControllerKind kind, RandomSource rng,
                            std::uint64_t seed);

Table convergence_table(const std::vector<TraceRow>& trace);
Table tune_table(const TuneOutcome& outcome, RandomSource rng, std::uint64_t seed);

/// Nominal, -50 %, -30 %, +30 %, +50 % joint scaling of the UC gain and time constant.
Table robustness_uc_table(const Scenario& scenario, const ControllerParams& params);
/// Nominal, then DEG, FESS, BESS disconnected; percentages relative to nominal.
Table robustness_disconnect_table(const Scenario& scenario, const ControllerParams& params);

struct RateLimitOutcome {
  Table summary;
  Table series;
  /// Largest observed |dP/dt| per limited component over the recorded series.
  std::vector<std::pair<Component, double>> max_slew;
};

/// Linear run vs the run with the scenario's slew limits. Throws
/// SlewViolation if any recorded per-step slew exceeds its limit by > 1e-12.
RateLimitOutcome rate_limit_study(const Scenario& scenario, const ControllerParams& params);

Table series_table(const SimResult& result);

/// Late-window mean of u over each u_ss segment against the expected value.
struct CalibrationRow {
  double start = 0.0;
  double end = 0.0;
  double expected = 0.0;
  double observed = 0.0;
};
std::vector<CalibrationRow> calibration_residuals(const ScenarioConfig& cfg, const SimResult& result,
                                                  double window = 10.0);

/// Markdown comparison tables assembled from the summary CSVs found in `dir`.
std::string render_report(const std::filesystem::path& dir);

/// Resolves scenario, seed and params, executes the command and writes its
/// artifacts into spec.out. Returns the written file paths.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

}  // namespace hybridlfc
