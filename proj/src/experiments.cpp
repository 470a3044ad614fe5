#include "hybridlfc/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommands{{
    {Command::Tune, "tune"},
    {Command::Simulate, "simulate"},
    {Command::RobustnessUc, "robustness-uc"},
    {Command::RobustnessDisconnect, "robustness-disconnect"},
    {Command::RateLimit, "rate-limit"},
    {Command::Report, "report"},
}};

constexpr std::array<ControllerKind, 3> kAllControllers{
    ControllerKind::Pid, ControllerKind::FuzzyPid, ControllerKind::FuzzyFopid};

std::string num(double v) { return format_number(v); }

std::vector<std::string> metric_cells(const Metrics& m) {
  return {num(m.ise), num(m.isdco), num(m.j)};
}

std::string controller_label(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Pid: return "PID";
    case ControllerKind::FuzzyPid: return "Fuzzy PID";
    case ControllerKind::FuzzyFopid: return "Fuzzy FOPID";
  }
  return "?";
}

std::vector<std::string> header_comments(Command cmd, const Scenario& s,
                                         std::optional<ControllerKind> kind = std::nullopt) {
  std::vector<std::string> lines;
  std::string line = fmt::format("hybridlfc {} seed={} realizations={}", command_name(cmd),
                                 s.sim.seed, s.sim.realizations);
  if (kind) line += fmt::format(" controller={}", controller_tag(*kind));
  lines.push_back(std::move(line));
  return lines;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  throw Error(ErrorCode::Config, fmt::format("unknown command '{}'", name));
}

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::Config, fmt::format("no column '{}'", name));
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, std::string_view col) const {
  return parse_number(rows.at(row).at(column(col)));
}

std::string render_csv(const Table& table, const std::vector<std::string>& comments) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << "\n";
  os << boost::algorithm::join(table.columns, ",") << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw Error(ErrorCode::InvalidArgument, "row width does not match the header");
    }
    os << boost::algorithm::join(row, ",") << "\n";
  }
  return os.str();
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    boost::algorithm::split(cells, line, [](char c) { return c == ','; });
    if (header) {
      t.columns = std::move(cells);
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw Error(ErrorCode::Config,
                  fmt::format("row has {} cells, header has {}", cells.size(), t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (header) throw Error(ErrorCode::Config, "table has no header");
  return t;
}

TuneOutcome tune_controller(const Scenario& scenario, ControllerKind kind, RandomSource rng,
                            std::uint64_t seed) {
  const ScenarioConfig& cfg = scenario.sim;
  const int realizations = cfg.realizations;
  const Objective objective = [&cfg, kind, realizations, seed](std::span<const double> x,
                                                               int generation) {
    return ensemble_objective(cfg, from_vector(kind, x), realizations,
                              derive_seed(seed, static_cast<std::uint64_t>(generation)));
  };
  SwarmConfig swarm = scenario.swarm;
  swarm.source = rng;
  const OptimizeResult res =
      optimize(objective, scenario.bounds.for_controller(kind), swarm, seed);
  return {from_vector(kind, res.best_position), res.best_value, res.trace};
}

Table convergence_table(const std::vector<TraceRow>& trace) {
  Table t{{"generation", "best_J", "mean_J"}, {}};
  for (const auto& row : trace) {
    t.rows.push_back({std::to_string(row.generation), num(row.best), num(row.mean)});
  }
  return t;
}

Table tune_table(const TuneOutcome& outcome, RandomSource rng, std::uint64_t seed) {
  Table t{{"controller", "rng", "seed", "j_min", "parameter", "value"}, {}};
  const ControllerKind kind = kind_of(outcome.params);
  const auto names = parameter_names(kind);
  const auto values = to_vector(outcome.params);
  for (std::size_t i = 0; i < names.size(); ++i) {
    t.rows.push_back({std::string(controller_tag(kind)), std::string(random_source_tag(rng)),
                      std::to_string(seed), num(outcome.j_min), std::string(names[i]),
                      num(values[i])});
  }
  return t;
}

Table robustness_uc_table(const Scenario& scenario, const ControllerParams& params) {
  const std::array<int, 5> changes{0, -50, -30, 30, 50};
  Table t{{"controller", "change_pct", "ise", "isdco", "j"}, {}};
  for (int pct : changes) {
    ScenarioConfig cfg = scenario.sim;
    const double scale = 1.0 + pct / 100.0;
    cfg.plant.uc.gain *= scale;
    cfg.plant.uc.time_constant *= scale;
    const Metrics m = ensemble_metrics(cfg, params, cfg.realizations, cfg.seed);
    std::vector<std::string> row{std::string(controller_tag(kind_of(params))), std::to_string(pct)};
    for (auto& c : metric_cells(m)) row.push_back(std::move(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table robustness_disconnect_table(const Scenario& scenario, const ControllerParams& params) {
  Table t{{"controller", "case", "ise", "isdco", "j", "decrease_ise_pct", "decrease_isdco_pct",
           "decrease_j_pct"},
          {}};
  const std::string tag(controller_tag(kind_of(params)));
  const Metrics nominal =
      ensemble_metrics(scenario.sim, params, scenario.sim.realizations, scenario.sim.seed);
  auto push = [&](std::string name, const Metrics& m) {
    std::vector<std::string> row{tag, std::move(name)};
    for (auto& c : metric_cells(m)) row.push_back(std::move(c));
    row.push_back(num(performance_decrease(nominal.ise, m.ise)));
    row.push_back(num(performance_decrease(nominal.isdco, m.isdco)));
    row.push_back(num(performance_decrease(nominal.j, m.j)));
    t.rows.push_back(std::move(row));
  };
  push("nominal", nominal);
  for (Component c : {Component::Deg, Component::Fess, Component::Bess}) {
    ScenarioConfig cfg = scenario.sim;
    cfg.plant.set_connected(c, false);
    push(std::string(component_name(c)) + "_off",
         ensemble_metrics(cfg, params, cfg.realizations, cfg.seed));
  }
  return t;
}

namespace {

const std::vector<double>& power_series(const SimResult& r, Component c) {
  switch (c) {
    case Component::Wtg: return r.p_wtg;
    case Component::Stpg: return r.p_stpg;
    case Component::Fc1: return r.p_fc1;
    case Component::Fc2: return r.p_fc2;
    case Component::Deg: return r.p_deg;
    case Component::Fess: return r.p_fess;
    case Component::Bess: return r.p_bess;
    case Component::Uc: return r.p_uc;
    case Component::Ae: break;
  }
  throw Error(ErrorCode::InvalidArgument,
              fmt::format("no recorded power series for '{}'", component_name(c)));
}

}  // namespace

RateLimitOutcome rate_limit_study(const Scenario& scenario, const ControllerParams& params) {
  const ScenarioConfig& linear_cfg = scenario.sim;
  ScenarioConfig limited_cfg = scenario.sim;
  for (const auto& [c, limit] : scenario.rate_limits) limited_cfg.plant.lag(c).rate_limit = limit;

  const Metrics linear =
      ensemble_metrics(linear_cfg, params, linear_cfg.realizations, linear_cfg.seed);
  const Metrics limited =
      ensemble_metrics(limited_cfg, params, limited_cfg.realizations, limited_cfg.seed);

  RateLimitOutcome out;
  const std::string tag(controller_tag(kind_of(params)));
  out.summary = Table{{"controller", "case", "ise", "isdco", "j", "increase_j_pct"}, {}};
  auto push = [&](std::string name, const Metrics& m) {
    std::vector<std::string> row{tag, std::move(name)};
    for (auto& c : metric_cells(m)) row.push_back(std::move(c));
    row.push_back(num((m.j - linear.j) / linear.j * 100.0));
    out.summary.rows.push_back(std::move(row));
  };
  push("linear", linear);
  push("limited", limited);

  // Series of realization 0 for plotting and slew validation.
  const SimResult a = run_closed_loop(linear_cfg, params, linear_cfg.seed, 0);
  const SimResult b = run_closed_loop(limited_cfg, params, limited_cfg.seed, 0);
  if (a.diverged || b.diverged) throw Error(ErrorCode::NonFiniteState, "rate-limit run diverged");

  Table& s = out.series;
  s.columns = {"t", "df_linear", "df_limited", "u_linear", "u_limited"};
  for (const auto& [c, limit] : scenario.rate_limits) {
    const std::string n(component_name(c));
    s.columns.push_back("p_" + n + "_linear");
    s.columns.push_back("p_" + n + "_limited");
    s.columns.push_back("dev_" + n);
  }
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    std::vector<std::string> row{num(a.t[i]), num(a.df[i]), num(b.df[i]), num(a.u[i]), num(b.u[i])};
    for (const auto& [c, limit] : scenario.rate_limits) {
      const double pa = power_series(a, c)[i];
      const double pb = power_series(b, c)[i];
      row.push_back(num(pa));
      row.push_back(num(pb));
      row.push_back(num(pb - pa));
    }
    s.rows.push_back(std::move(row));
  }

  for (const auto& [c, limit] : scenario.rate_limits) {
    const auto& p = power_series(b, c);
    double worst = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      worst = std::max(worst, std::abs(p[i] - p[i - 1]) / limited_cfg.step);
    }
    out.max_slew.emplace_back(c, worst);
    if (worst > limit + 1e-12) {
      throw Error(ErrorCode::SlewViolation,
                  fmt::format("{} slew {} exceeds limit {}", component_name(c), worst, limit));
    }
  }
  return out;
}

Table series_table(const SimResult& r) {
  Table t{{"t", "df", "u", "p_wtg", "p_stpg", "p_fc1", "p_fc2", "p_deg", "p_fess", "p_bess", "p_uc",
           "p_load"},
          {}};
  t.rows.reserve(r.t.size());
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    t.rows.push_back({num(r.t[i]), num(r.df[i]), num(r.u[i]), num(r.p_wtg[i]), num(r.p_stpg[i]),
                      num(r.p_fc1[i]), num(r.p_fc2[i]), num(r.p_deg[i]), num(r.p_fess[i]),
                      num(r.p_bess[i]), num(r.p_uc[i]), num(r.p_load[i])});
  }
  return t;
}

std::vector<CalibrationRow> calibration_residuals(const ScenarioConfig& cfg, const SimResult& r,
                                                  double window) {
  std::vector<CalibrationRow> rows;
  for (std::size_t k = 0; k < cfg.u_ss.size(); ++k) {
    CalibrationRow row;
    row.start = cfg.u_ss[k].time;
    row.end = k + 1 < cfg.u_ss.size() ? cfg.u_ss[k + 1].time : cfg.t_max;
    row.expected = switching_signal(cfg.u_ss, row.start);
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      if (r.t[i] >= row.end - window && r.t[i] < row.end) {
        sum += r.u[i];
        ++count;
      }
    }
    row.observed = count > 0 ? sum / count : std::nan("");
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::optional<Table> try_table(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  return parse_csv(read_text(path));
}

std::string md_row(const std::vector<std::string>& cells) {
  return "| " + boost::algorithm::join(cells, " | ") + " |\n";
}

std::string md_rule(std::size_t n) {
  std::string s = "|";
  for (std::size_t i = 0; i < n; ++i) s += "---|";
  return s + "\n";
}

std::string fixed(double v, int digits = 2) {
  if (!std::isfinite(v)) return format_number(v);
  return fmt::format("{:.{}f}", v, digits);
}

}  // namespace

std::string render_report(const fs::path& dir) {
  std::ostringstream os;
  os << "# hybridlfc results\n";

  // Tuning: one row per (controller, rng).
  std::vector<std::vector<std::string>> tune_rows;
  for (ControllerKind kind : kAllControllers) {
    for (RandomSource src : {RandomSource::Uniform, RandomSource::Logistic, RandomSource::Henon}) {
      const auto t = try_table(dir / fmt::format("tune_{}_{}.csv", controller_tag(kind),
                                                 random_source_tag(src)));
      if (!t || t->rows.empty()) continue;
      std::vector<std::string> params;
      for (std::size_t i = 0; i < t->rows.size(); ++i) {
        params.push_back(t->rows[i][t->column("parameter")] + "=" +
                         fixed(t->number(i, "value")));
      }
      tune_rows.push_back({controller_label(kind), std::string(random_source_tag(src)),
                           fixed(t->number(0, "j_min")), boost::algorithm::join(params, ", ")});
    }
  }
  if (!tune_rows.empty()) {
    os << "\n## PSO tuning\n\n";
    os << md_row({"Controller", "RNG", "J_min", "Parameters"}) << md_rule(4);
    for (const auto& r : tune_rows) os << md_row(r);
  }

  // UC perturbation: rows = change, columns = controller "ISE (ISDCO)".
  std::map<ControllerKind, Table> uc;
  for (ControllerKind kind : kAllControllers) {
    if (auto t = try_table(dir / fmt::format("robustness_uc_{}.csv", controller_tag(kind)))) {
      uc.emplace(kind, std::move(*t));
    }
  }
  if (!uc.empty()) {
    os << "\n## UC parameter variation, ISE (ISDCO)\n\n";
    std::vector<std::string> head{"Change"};
    for (const auto& [kind, t] : uc) head.push_back(controller_label(kind));
    os << md_row(head) << md_rule(head.size());
    const Table& first = uc.begin()->second;
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
      std::vector<std::string> row{first.rows[i][first.column("change_pct")] + " %"};
      for (const auto& [kind, t] : uc) {
        row.push_back(i < t.rows.size() ? fixed(t.number(i, "ise")) + " (" +
                                              fixed(t.number(i, "isdco")) + ")"
                                        : "");
      }
      os << md_row(row);
    }
  }

  std::map<ControllerKind, Table> disc;
  for (ControllerKind kind : kAllControllers) {
    if (auto t =
            try_table(dir / fmt::format("robustness_disconnect_{}.csv", controller_tag(kind)))) {
      disc.emplace(kind, std::move(*t));
    }
  }
  if (!disc.empty()) {
    os << "\n## Disconnection, J (decrease %)\n\n";
    std::vector<std::string> head{"Case"};
    for (const auto& [kind, t] : disc) head.push_back(controller_label(kind));
    os << md_row(head) << md_rule(head.size());
    const Table& first = disc.begin()->second;
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
      std::vector<std::string> row{first.rows[i][first.column("case")]};
      for (const auto& [kind, t] : disc) {
        row.push_back(i < t.rows.size() ? fixed(t.number(i, "j")) + " (" +
                                              fixed(t.number(i, "decrease_j_pct")) + ")"
                                        : "");
      }
      os << md_row(row);
    }
  }

  std::vector<std::vector<std::string>> rate_rows;
  for (ControllerKind kind : kAllControllers) {
    const auto t = try_table(dir / fmt::format("rate_limit_{}.csv", controller_tag(kind)));
    if (!t || t->rows.size() < 2) continue;
    rate_rows.push_back({controller_label(kind), fixed(t->number(0, "j")), fixed(t->number(1, "j")),
                         fixed(t->number(1, "increase_j_pct"))});
  }
  if (!rate_rows.empty()) {
    os << "\n## Slew-rate limits\n\n";
    os << md_row({"Controller", "J linear", "J limited", "Increase %"}) << md_rule(4);
    for (const auto& r : rate_rows) os << md_row(r);
  }
  return os.str();
}

std::vector<fs::path> run_experiment(const ExperimentSpec& spec) {
  Scenario scenario = spec.scenario.empty() ? default_scenario() : load_scenario(spec.scenario);
  if (spec.seed) scenario.sim.seed = *spec.seed;
  if (spec.realizations) scenario.sim.realizations = *spec.realizations;
  for (Component c : spec.disconnected) scenario.sim.plant.set_connected(c, false);
  scenario.validate();

  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const fs::path p = spec.out / name;
    write_text(p, text);
    written.push_back(p);
  };

  const ControllerKind kind = spec.controller;
  const std::string tag(controller_tag(kind));

  auto resolve_params = [&]() -> ControllerParams {
    if (spec.params) {
      ControllerParams p = load_params(*spec.params);
      if (kind_of(p) != kind) {
        throw Error(ErrorCode::Config,
                    fmt::format("params file holds '{}', expected '{}'",
                                controller_tag(kind_of(p)), tag));
      }
      return p;
    }
    const auto it = scenario.controllers.find(kind);
    if (it == scenario.controllers.end()) {
      throw Error(ErrorCode::Config, fmt::format("no parameters for '{}'", tag));
    }
    return it->second;
  };

  switch (spec.command) {
    case Command::Tune: {
      const TuneOutcome res = tune_controller(scenario, kind, spec.rng, scenario.sim.seed);
      const std::string suffix = fmt::format("{}_{}", tag, random_source_tag(spec.rng));
      const auto comments = header_comments(spec.command, scenario, kind);
      emit("params_" + suffix + ".ini",
           render_params(res.params, {{"j_min", num(res.j_min)},
                                      {"rng", std::string(random_source_tag(spec.rng))},
                                      {"seed", std::to_string(scenario.sim.seed)}}));
      emit("convergence_" + suffix + ".csv", render_csv(convergence_table(res.trace), comments));
      emit("tune_" + suffix + ".csv",
           render_csv(tune_table(res, spec.rng, scenario.sim.seed), comments));
      break;
    }
    case Command::Simulate: {
      const ControllerParams params = resolve_params();
      const SimResult r = run_closed_loop(scenario.sim, params, scenario.sim.seed, 0);
      const Metrics ens = r.diverged ? Metrics{r.metrics}
                                     : ensemble_metrics(scenario.sim, params,
                                                        scenario.sim.realizations,
                                                        scenario.sim.seed);
      emit("series_" + tag + ".csv",
           render_csv(series_table(r), header_comments(spec.command, scenario, kind)));
      std::vector<std::pair<std::string, std::string>> kv{
          {"seed", std::to_string(scenario.sim.seed)},
          {"realizations", std::to_string(scenario.sim.realizations)},
          {"diverged", r.diverged ? "true" : "false"},
          {"ise", num(r.metrics.ise)},
          {"isdco", num(r.metrics.isdco)},
          {"j", num(r.metrics.j)},
          {"ensemble_ise", num(ens.ise)},
          {"ensemble_isdco", num(ens.isdco)},
          {"ensemble_j", num(ens.j)},
      };
      if (!r.diverged) {
        for (const auto& row : calibration_residuals(scenario.sim, r)) {
          const std::string key = fmt::format("u_window_{}", format_number(row.end));
          kv.emplace_back(key + "_expected", num(row.expected));
          kv.emplace_back(key + "_observed", num(row.observed));
          kv.emplace_back(key + "_residual", num(row.observed - row.expected));
        }
      }
      emit("metrics_" + tag + ".ini", render_params(params, kv));
      break;
    }
    case Command::RobustnessUc: {
      emit("robustness_uc_" + tag + ".csv",
           render_csv(robustness_uc_table(scenario, resolve_params()),
                      header_comments(spec.command, scenario, kind)));
      break;
    }
    case Command::RobustnessDisconnect: {
      emit("robustness_disconnect_" + tag + ".csv",
           render_csv(robustness_disconnect_table(scenario, resolve_params()),
                      header_comments(spec.command, scenario, kind)));
      break;
    }
    case Command::RateLimit: {
      const RateLimitOutcome res = rate_limit_study(scenario, resolve_params());
      const auto comments = header_comments(spec.command, scenario, kind);
      emit("rate_limit_" + tag + ".csv", render_csv(res.summary, comments));
      emit("rate_limit_series_" + tag + ".csv", render_csv(res.series, comments));
      break;
    }
    case Command::Report: {
      emit("report.md", render_report(spec.out));
      break;
    }
  }
  return written;
}

}  // namespace hybridlfc
