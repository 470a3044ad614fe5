#include "hybridlfc/sim.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hybridlfc/error.hpp"
#include "hybridlfc/integrator.hpp"

namespace hybridlfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Layout {
  std::size_t wind;
  std::size_t solar;
  std::size_t load;
  std::size_t controller;
  std::size_t size;
};

Layout make_layout(const ScenarioConfig& cfg, const ControllerBlock& block) {
  Layout l{};
  l.wind = plant_state::kSize;
  l.solar = l.wind + cfg.wind.state_size();
  l.load = l.solar + cfg.solar.state_size();
  l.controller = l.load + cfg.load.state_size();
  l.size = l.controller + block.state_size();
  return l;
}

}  // namespace

std::size_t ScenarioConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_max / step));
}

void ScenarioConfig::validate() const {
  if (!(step > 0.0) || !(t_max > 0.0)) {
    throw Error(ErrorCode::Config, "step and t_max must be > 0");
  }
  const double n = t_max / step;
  if (std::abs(n - std::round(n)) > 1e-9 * n) {
    throw Error(ErrorCode::Config, fmt::format("t_max {} is not a multiple of step {}", t_max, step));
  }
  if (weights.frequency < 0.0 || weights.control < 0.0) {
    throw Error(ErrorCode::Config, "objective weights must be >= 0");
  }
  if (error_sign != 1.0 && error_sign != -1.0) {
    throw Error(ErrorCode::Config, "error sign must be +1 or -1");
  }
  if (realizations < 1) throw Error(ErrorCode::Config, "realizations must be >= 1");
  plant.validate();
  wind.validate(t_max);
  solar.validate(t_max);
  load.validate(t_max);
  for (const auto* sched : {&u_ss, &wind.schedule, &wind.additive, &solar.schedule,
                            &solar.additive, &load.schedule, &load.additive}) {
    for (const SwitchTerm& term : *sched) {
      if (term.time < 0.0 || term.time > t_max) {
        throw Error(ErrorCode::Config,
                    fmt::format("switching time {} outside [0, {}]", term.time, t_max));
      }
      const double k = term.time / step;
      if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k)) {
        throw Error(ErrorCode::Config,
                    fmt::format("switching time {} is not on the step grid {}", term.time, step));
      }
    }
  }
}

SimResult run_closed_loop(const ScenarioConfig& cfg, const ControllerParams& params,
                          std::uint64_t seed, std::uint64_t realization,
                          const RunOptions& options) {
  const ControllerBlock block = make_controller(params, cfg.controller);
  const Layout layout = make_layout(cfg, block);
  const std::size_t n_steps = cfg.steps();
  const double h = cfg.step;

  std::array<NoiseStream, 3> streams{
      NoiseStream(seed, realization, static_cast<std::uint64_t>(ProfileKind::Wind)),
      NoiseStream(seed, realization, static_cast<std::uint64_t>(ProfileKind::Solar)),
      NoiseStream(seed, realization, static_cast<std::uint64_t>(ProfileKind::Load))};
  std::array<double, 3> phi{};

  const std::size_t nw = cfg.wind.state_size();
  const std::size_t ns = cfg.solar.state_size();
  const std::size_t nl = cfg.load.state_size();
  const std::size_t nc = block.state_size();

  std::vector<double> y(layout.size, 0.0);
  std::vector<double> scratch(layout.size, 0.0);
  double stage_u = 0.0;

  auto control = [&](std::span<const double> x, std::span<double> dxc) {
    const double e = cfg.error_sign * x[plant_state::kFrequency];
    return block.evaluate(x.subspan(layout.controller, nc), e, dxc);
  };

  auto rhs = [&](double t, std::span<const double> x, std::span<double> dx) {
    const double u = control(x, dx.subspan(layout.controller, nc));
    stage_u = u;
    const auto xw = x.subspan(layout.wind, nw);
    const auto xs = x.subspan(layout.solar, ns);
    const auto xl = x.subspan(layout.load, nl);
    const double p_wind = cfg.wind.value(xw, phi[0], t);
    const double p_solar = cfg.solar.value(xs, phi[1], t);
    const double p_load = cfg.load.value(xl, phi[2], t);
    cfg.wind.filter_derivative(xw, phi[0], dx.subspan(layout.wind, nw));
    cfg.solar.filter_derivative(xs, phi[1], dx.subspan(layout.solar, ns));
    cfg.load.filter_derivative(xl, phi[2], dx.subspan(layout.load, nl));
    plant_derivatives(cfg.plant, x.first(plant_state::kSize), u, p_wind, p_solar, p_load,
                      dx.first(plant_state::kSize));
  };

  SimResult r;
  r.t.reserve(n_steps + 1);
  r.df.reserve(n_steps + 1);
  r.u.reserve(n_steps + 1);

  auto record = [&](double t, std::span<const double> x, double u) {
    r.t.push_back(t);
    r.df.push_back(x[plant_state::kFrequency]);
    r.u.push_back(u);
    if (!options.record_powers) return;
    const auto& p = cfg.plant;
    r.p_wtg.push_back(component_power(p, x, Component::Wtg));
    r.p_stpg.push_back(component_power(p, x, Component::Stpg));
    r.p_fc1.push_back(component_power(p, x, Component::Fc1));
    r.p_fc2.push_back(component_power(p, x, Component::Fc2));
    r.p_deg.push_back(component_power(p, x, Component::Deg));
    r.p_fess.push_back(component_power(p, x, Component::Fess));
    r.p_bess.push_back(component_power(p, x, Component::Bess));
    r.p_uc.push_back(component_power(p, x, Component::Uc));
    r.p_load.push_back(cfg.load.value(x.subspan(layout.load, nl), phi[2], t));
  };

  Bs3Stepper stepper(layout.size);
  try {
    for (std::size_t k = 0; k < n_steps; ++k) {
      const double t = static_cast<double>(k) * h;
      for (std::size_t i = 0; i < streams.size(); ++i) phi[i] = streams[i].next();
      // The first stage runs at (t_k, y_k): record the grid point there.
      bool first = true;
      stepper.step(
          [&](double ts, std::span<const double> x, std::span<double> dx) {
            rhs(ts, x, dx);
            if (first) {
              record(t, x, stage_u);
              first = false;
            }
          },
          t, y, h);
    }
    const double t_end = static_cast<double>(n_steps) * h;
    rhs(t_end, y, scratch);
    record(t_end, y, stage_u);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NonFiniteState) throw;
    r.diverged = true;
    r.metrics = {kInf, kInf, kInf};
    return r;
  }

  r.metrics = compute_metrics(r.t, r.df, r.u, cfg.u_ss, cfg.weights);
  return r;
}

Metrics compute_metrics(std::span<const double> t, std::span<const double> df,
                        std::span<const double> u, std::span<const SwitchTerm> u_ss,
                        const ObjectiveWeights& weights) {
  if (t.size() != df.size() || t.size() != u.size()) {
    throw Error(ErrorCode::InvalidArgument, "metric series lengths differ");
  }
  Metrics m;
  if (t.size() < 2) return m;
  double prev_f = df[0] * df[0];
  double prev_c = u[0] - switching_signal(u_ss, t[0]);
  prev_c *= prev_c;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double f = df[k] * df[k];
    double c = u[k] - switching_signal(u_ss, t[k]);
    c *= c;
    const double dt = t[k] - t[k - 1];
    m.ise += 0.5 * dt * (prev_f + f);
    m.isdco += 0.5 * dt * (prev_c + c);
    prev_f = f;
    prev_c = c;
  }
  m.j = weights.frequency * m.ise + weights.control * m.isdco;
  if (!std::isfinite(m.j)) m = {kInf, kInf, kInf};
  return m;
}

double performance_decrease(double nominal, double perturbed) {
  if (!(nominal > 0.0)) {
    throw Error(ErrorCode::ZeroNominal, "performance decrease needs a positive nominal value");
  }
  return std::abs(nominal - perturbed) / nominal * 100.0;
}

Metrics ensemble_metrics(const ScenarioConfig& cfg, const ControllerParams& params, int realizations,
                         std::uint64_t seed) {
  if (realizations < 1) throw Error(ErrorCode::InvalidArgument, "realizations must be >= 1");
  Metrics sum;
  const RunOptions lean{.record_powers = false};
  for (int r = 0; r < realizations; ++r) {
    const SimResult res = run_closed_loop(cfg, params, seed, static_cast<std::uint64_t>(r), lean);
    if (res.diverged) return {kInf, kInf, kInf};
    sum.ise += res.metrics.ise;
    sum.isdco += res.metrics.isdco;
  }
  const double n = static_cast<double>(realizations);
  Metrics mean{sum.ise / n, sum.isdco / n, 0.0};
  mean.j = cfg.weights.frequency * mean.ise + cfg.weights.control * mean.isdco;
  return mean;
}

double ensemble_objective(const ScenarioConfig& cfg, const ControllerParams& params,
                          int realizations, std::uint64_t seed) {
  return ensemble_metrics(cfg, params, realizations, seed).j;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace hybridlfc
