// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "../support/oracles.hpp"
#include "hybridlfc/experiments.hpp"
#include "hybridlfc/fuzzy.hpp"
#include "hybridlfc/integrator.hpp"
#include "hybridlfc/oustaloup.hpp"
#include "hybridlfc/pso.hpp"
#include "hybridlfc/scenario.hpp"
#include "hybridlfc/sim.hpp"

using namespace hybridlfc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, std::string_view name, const Outcome& o, double seconds) {
  fmt::print("[{}] {:>2}. {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(int id, std::string_view name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, o, s);
}

constexpr std::array<ControllerKind, 3> kControllers{ControllerKind::Pid, ControllerKind::FuzzyPid,
                                                     ControllerKind::FuzzyFopid};
constexpr int kHeldOut = 10;
// Default tuning budget for criterion 2, shared by all three structures.
constexpr int kReducedParticles = 20;
constexpr int kReducedGenerations = 60;
// Seed family for held-out evaluation, disjoint from the tuning seeds.
constexpr std::uint64_t kHeldOutSeed = 0x5eed0fu;

struct Budget {
  int particles;
  int generations;
  int realizations;
};

std::string short_name(ControllerKind k) { return std::string(controller_tag(k)); }

// Tuned parameters shared by the comparative criteria.
std::map<ControllerKind, ControllerParams> tuned;

Outcome pid_benchmark(const Scenario& s) {
  const ControllerParams pid = PidParams{2.04, 0.64, 0.61};
  const auto t0 = std::chrono::steady_clock::now();
  const int r = 20;
  double ise = 0.0, isdco = 0.0;
  bool exact = true;
  for (int k = 0; k < r; ++k) {
    const SimResult res = run_closed_loop(s.sim, pid, s.sim.seed, static_cast<std::uint64_t>(k),
                                          {.record_powers = false});
    exact = exact && !res.diverged && res.metrics.ise + res.metrics.isdco == res.metrics.j;
    ise += res.metrics.ise;
    isdco += res.metrics.isdco;
  }
  ise /= r;
  isdco /= r;
  const Metrics ens = ensemble_metrics(s.sim, pid, r, s.sim.seed);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double j = ens.j;
  const bool additive = exact && std::abs(ens.ise + ens.isdco - j) <= 4 * 2.2e-16 * j &&
                        ens.ise == ise && ens.isdco == isdco;
  return {j >= 3.2 && j <= 5.8 && additive && secs < 5.0,
          fmt::format("mean J = {:.3f} (ISE {:.3f} + ISDCO {:.3f}) over {} realizations, "
                      "band [3.2, 5.8], per-run ISE + ISDCO == J: {}, {:.2f} s for both passes",
                      j, ise, isdco, r, additive ? "yes" : "no", secs)};
}

Outcome controller_ordering(const Scenario& base, const Budget& b) {
  Scenario s = base;
  s.swarm.particles = b.particles;
  s.swarm.generations = b.generations;
  s.sim.realizations = b.realizations;
  std::map<ControllerKind, double> held;
  std::string detail;
  for (ControllerKind k : kControllers) {
    const TuneOutcome t = tune_controller(s, k, RandomSource::Uniform, s.sim.seed);
    tuned[k] = t.params;
    held[k] = ensemble_objective(base.sim, t.params, kHeldOut, kHeldOutSeed);
    const auto v = to_vector(t.params);
    std::vector<std::string> cells;
    for (double x : v) cells.push_back(fmt::format("{:.3g}", x));
    detail += fmt::format("{} J = {:.3f} [{}]; ", short_name(k), held[k], fmt::join(cells, " "));
  }
  const double pid = held[ControllerKind::Pid];
  const double fpid = held[ControllerKind::FuzzyPid];
  const double fofpid = held[ControllerKind::FuzzyFopid];
  const bool ok = fofpid <= fpid * 1.02 && fpid <= pid * 1.02;
  return {ok, detail + fmt::format("budget {}x{} with {} realizations, held-out {} realizations, "
                                   "2% tie tolerance",
                                   b.particles, b.generations, b.realizations, kHeldOut)};
}

Metrics held_out(const ScenarioConfig& cfg, const ControllerParams& p) {
  return ensemble_metrics(cfg, p, kHeldOut, kHeldOutSeed);
}

Outcome disconnection(const Scenario& s) {
  bool ok = true;
  std::string detail;
  for (ControllerKind k : kControllers) {
    const ControllerParams& p = tuned.at(k);
    std::map<Component, double> j;
    const double nominal = held_out(s.sim, p).j;
    for (Component c : {Component::Deg, Component::Fess, Component::Bess}) {
      ScenarioConfig cfg = s.sim;
      cfg.plant.set_connected(c, false);
      j[c] = held_out(cfg, p).j;
    }
    const double deg = j[Component::Deg], fess = j[Component::Fess], bess = j[Component::Bess];
    const bool fess_worst = fess > deg && fess > bess;
    ok = ok && fess_worst;
    if (k == ControllerKind::Pid) ok = ok && nominal < deg && deg < bess && bess < fess;
    detail += fmt::format("{}: nominal {:.3f}, deg {:.3f}, bess {:.3f}, fess {:.3f}; ",
                          short_name(k), nominal, deg, bess, fess);
  }
  return {ok, detail + "requires PID nominal < deg < bess < fess and fess worst for all"};
}

Outcome uc_trend(const Scenario& s) {
  bool ok = true;
  std::string detail;
  for (ControllerKind k : kControllers) {
    const ControllerParams& p = tuned.at(k);
    const double nominal = held_out(s.sim, p).ise;
    ScenarioConfig cfg = s.sim;
    cfg.plant.uc.gain *= 0.5;
    cfg.plant.uc.time_constant *= 0.5;
    const double dec = held_out(cfg, p).ise;
    ok = ok && dec > 1.5 * nominal;
    detail += fmt::format("{} ISE {:.3f} -> {:.3f} (x{:.2f}); ", short_name(k), nominal, dec,
                          dec / nominal);
  }
  return {ok, detail + "threshold x1.5"};
}

Outcome rate_limits(const Scenario& base) {
  bool ok = true;
  std::string detail;
  for (ControllerKind k : kControllers) {
    Scenario s = base;
    s.sim.realizations = kHeldOut;
    s.sim.seed = kHeldOutSeed;
    const RateLimitOutcome r = rate_limit_study(s, tuned.at(k));
    const double lin = r.summary.number(0, "j");
    const double lim = r.summary.number(1, "j");
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (const auto& [c, slew] : r.max_slew) {
      worst_excess = std::max(worst_excess, slew - s.rate_limits.at(c));
    }
    ok = ok && lim > lin && worst_excess <= 1e-12;
    detail += fmt::format("{} J {:.3f} -> {:.3f}, max slew excess {:.2e}; ", short_name(k), lin, lim,
                          worst_excess);
  }
  return {ok, detail + "slew tolerance 1e-12"};
}

Outcome oustaloup_fidelity() {
  double worst_phase = 0.0, worst_db = 0.0;
  for (double alpha : {-1.0, -0.5, 0.5, 1.0}) {
    const LinearStateSpace ss = fractional_operator(alpha);
    for (int i = 0; i < 20; ++i) {
      const double w = 0.1 * std::pow(100.0, i / 19.0);
      const auto h = ss.freq_response(w);
      const auto ref = oracle::oustaloup_response(alpha, 1e-2, 1e2, 2, w);
      if (std::abs(h - ref) > 1e-9 * std::abs(ref)) return {false, "realization differs from zpk"};
      worst_phase = std::max(worst_phase, std::abs(oracle::to_deg(std::arg(h)) - 90.0 * alpha));
      worst_db = std::max(worst_db,
                          std::abs(oracle::to_db(std::abs(h)) - oracle::to_db(std::pow(w, alpha))));
    }
  }
  return {worst_phase < 5.0 && worst_db < 0.5,
          fmt::format("worst phase error {:.2f} deg (< 5), worst magnitude error {:.3f} dB (< 0.5) "
                      "over 20 frequencies in [0.1, 10] rad/s",
                      worst_phase, worst_db)};
}

Outcome fuzzy_properties() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double odd = 0.0, bound = 0.0, cog = 0.0, diag = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double e = u(rng), de = u(rng);
    const double v = flc(e, de);
    odd = std::max(odd, std::abs(v + flc(-e, -de)));
    bound = std::max(bound, std::abs(v));
    if (i < 200) cog = std::max(cog, std::abs(v - oracle::flc_dense(e, de)));
  }
  int mono = 0;
  for (int a = 0; a <= 100; ++a) {
    const double fixed = -1.0 + a / 50.0;
    diag = std::max(diag, std::abs(flc(fixed, -fixed)));
    for (int b = 1; b <= 100; ++b) {
      const double x0 = -1.0 + (b - 1) / 50.0, x1 = -1.0 + b / 50.0;
      mono += flc(x1, fixed) < flc(x0, fixed) - 1e-12;
      mono += flc(fixed, x1) < flc(fixed, x0) - 1e-12;
    }
  }
  return {odd < 1e-9 && bound <= 1.0 && diag < 1e-12 && mono == 0 && cog < 1e-6,
          fmt::format("odd-symmetry error {:.1e}, max |flc| {:.4f}, anti-diagonal {:.1e}, "
                      "monotonicity violations {}, COG vs dense oracle {:.1e}",
                      odd, bound, diag, mono, cog)};
}

Outcome integrator_order() {
  auto err = [](double h) {
    std::vector<double> y{1.0};
    const Rhs f = [](double, std::span<const double> s, std::span<double> d) { d[0] = -s[0]; };
    const int n = static_cast<int>(std::llround(1.0 / h));
    for (int k = 0; k < n; ++k) y = bs3_step(f, k * h, y, h);
    return std::abs(y[0] - std::exp(-1.0));
  };
  std::vector<std::string> orders;
  bool ok = true;
  for (double h : {0.1, 0.05, 0.025}) {
    const double p = std::log2(err(h) / err(h / 2));
    ok = ok && std::abs(p - 3.0) <= 0.1;
    orders.push_back(fmt::format("{:.3f}", p));
  }
  return {ok, fmt::format("observed orders {} on y' = -y", fmt::join(orders, ", "))};
}

Outcome chaotic_maps() {
  HenonState h;
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = henon_next(h);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  HenonState at_lo{-0.3854 / 0.3, 0.0}, at_hi{0.3819 / 0.3, 0.0};
  const double e0 = henon_next(at_lo), e1 = henon_next(at_hi);
  LogisticState l;
  double sum = 0.0;
  for (int i = 0; i < 1000000; ++i) sum += logistic_next(l);
  const double mean = sum / 1e6;
  const bool ok = lo >= 0.0 && hi <= 1.0 && std::abs(e0) < 1e-12 && std::abs(e1 - 1.0) < 1e-12 &&
                  std::abs(mean - 0.5) <= 0.01;
  return {ok, fmt::format("Henon range [{:.4f}, {:.4f}], endpoints -> {:.1e}, {:.12f}; "
                          "Logistic mean {:.4f}",
                          lo, hi, e0, e1, mean)};
}

Outcome optimizer_sanity() {
  bool ok = true;
  std::string detail;
  const Bounds b{std::vector<double>(5, -5.0), std::vector<double>(5, 5.0)};
  const Objective sphere = [](std::span<const double> x, int) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  for (RandomSource src : {RandomSource::Uniform, RandomSource::Logistic, RandomSource::Henon}) {
    SwarmConfig cfg;
    cfg.source = src;
    const OptimizeResult r = optimize(sphere, b, cfg, 1);
    bool monotone = true;
    for (std::size_t k = 1; k < r.trace.size(); ++k) monotone = monotone && r.trace[k].best <= r.trace[k - 1].best;
    ok = ok && monotone && r.best_value < 1e-3;
    detail += fmt::format("{} best {:.2e}{}; ", random_source_tag(src), r.best_value,
                          monotone ? "" : " (trace not monotone)");
  }
  return {ok, detail + "30 particles x 300 generations, target < 1e-3"};
}

Outcome reproducibility(const Scenario& base) {
  const fs::path dir = fs::temp_directory_path() / "hybridlfc_acceptance_repro";
  fs::remove_all(dir);
  Scenario s = base;
  s.sim.t_max = 90.0;
  s.sim.realizations = 2;
  s.swarm.particles = 5;
  s.swarm.generations = 3;
  write_text(dir / "scenario.ini", render_scenario(s));
  std::size_t files = 0;
  for (Command cmd : {Command::Tune, Command::Simulate, Command::RobustnessUc,
                      Command::RobustnessDisconnect, Command::RateLimit, Command::Report}) {
    for (ControllerKind k : kControllers) {
      std::vector<std::string> texts[2];
      for (int pass = 0; pass < 2; ++pass) {
        ExperimentSpec spec;
        spec.command = cmd;
        spec.controller = k;
        spec.rng = RandomSource::Henon;
        spec.scenario = dir / "scenario.ini";
        spec.seed = 99;
        spec.out = dir / (pass == 0 ? "a" : "b");
        for (const auto& p : run_experiment(spec)) texts[pass].push_back(read_text(p));
      }
      if (texts[0] != texts[1]) {
        return {false, fmt::format("{} {} output differs between runs", command_name(cmd),
                                   controller_tag(k))};
      }
      files += texts[0].size();
    }
  }
  fs::remove_all(dir);
  return {true, fmt::format("{} artifacts from all six commands byte-identical across reruns", files)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool full = false;
  app.add_flag("--full", full, "Tune with 30 particles x 300 generations for criterion 2");
  CLI11_PARSE(app, argc, argv);

  const Scenario nominal = default_scenario();
  const Budget budget = full ? Budget{30, 300, 4} : Budget{kReducedParticles, kReducedGenerations, 4};

  run(1, "PID benchmark", [&] { return pid_benchmark(nominal); });
  run(2, "controller ordering", [&] { return controller_ordering(nominal, budget); });
  const bool have_tuned = tuned.size() == kControllers.size();
  auto needs_tuned = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (!have_tuned) return {false, "tuning did not complete"};
      return fn();
    };
  };
  run(3, "disconnection ordering", needs_tuned([&] { return disconnection(nominal); }));
  run(4, "UC perturbation trend", needs_tuned([&] { return uc_trend(nominal); }));
  run(5, "rate-limit effect", needs_tuned([&] { return rate_limits(nominal); }));
  run(6, "Oustaloup fidelity", oustaloup_fidelity);
  run(7, "fuzzy engine properties", fuzzy_properties);
  run(8, "integrator order", integrator_order);
  run(9, "chaotic maps", chaotic_maps);
  run(10, "optimizer sanity", optimizer_sanity);
  run(11, "reproducibility", [&] { return reproducibility(nominal); });

  fmt::print("{} of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
