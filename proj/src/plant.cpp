#include "hybridlfc/plant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

namespace {

constexpr std::array<std::string_view, kComponentCount> kNames{
    "wtg", "stpg", "ae", "fc1", "fc2", "deg", "fess", "bess", "uc"};

void check_lag(const FirstOrderLag& lag, std::string_view name) {
  if (!(lag.time_constant > 0.0) || !std::isfinite(lag.gain)) {
    throw Error(ErrorCode::Config, fmt::format("{}: time constant must be > 0", name));
  }
  if (lag.rate_limit && !(*lag.rate_limit > 0.0)) {
    throw Error(ErrorCode::Config, fmt::format("{}: rate limit must be > 0", name));
  }
}

}  // namespace

double FirstOrderLag::derivative(double x, double u) const {
  const double d = (gain * u - x) / time_constant;
  if (rate_limit) return std::clamp(d, -*rate_limit, *rate_limit);
  return d;
}

std::string_view component_name(Component c) { return kNames[static_cast<std::size_t>(c)]; }

Component parse_component(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Component>(i);
  }
  throw Error(ErrorCode::Config, fmt::format("unknown component '{}'", name));
}

FirstOrderLag& PlantConfig::lag(Component c) {
  return const_cast<FirstOrderLag&>(std::as_const(*this).lag(c));
}

const FirstOrderLag& PlantConfig::lag(Component c) const {
  switch (c) {
    case Component::Wtg: return wtg;
    case Component::Stpg: return solar_turbine;
    case Component::Ae: return ae;
    case Component::Fc1:
    case Component::Fc2: return fc;
    case Component::Deg: return deg;
    case Component::Fess: return fess;
    case Component::Bess: return bess;
    case Component::Uc: return uc;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown component");
}

void PlantConfig::validate() const {
  check_lag(wtg, "wtg");
  check_lag(solar_collector, "stpg collector");
  check_lag(solar_turbine, "stpg turbine");
  check_lag(ae, "ae");
  check_lag(fc, "fc");
  check_lag(deg, "deg");
  check_lag(fess, "fess");
  check_lag(bess, "bess");
  check_lag(uc, "uc");
  if (!(inertia > 0.0) || !(damping > 0.0)) {
    throw Error(ErrorCode::Config, "inertia and damping must be > 0");
  }
  if (!(grid_fraction >= 0.0 && grid_fraction <= 1.0)) {
    throw Error(ErrorCode::Config, "grid fraction must lie in [0, 1]");
  }
  if (storage_sign != 1.0 && storage_sign != -1.0) {
    throw Error(ErrorCode::Config, "storage sign must be +1 or -1");
  }
}

double component_power(const PlantConfig& cfg, std::span<const double> x, Component c) {
  if (!cfg.is_connected(c)) return 0.0;
  using namespace plant_state;
  switch (c) {
    case Component::Wtg: return x[kWtg];
    case Component::Stpg: return x[kStpg];
    case Component::Ae: return x[kAe];
    case Component::Fc1: return x[kFc1];
    case Component::Fc2: return x[kFc2];
    case Component::Deg: return x[kDeg];
    case Component::Fess: return x[kFess];
    case Component::Bess: return x[kBess];
    case Component::Uc: return x[kUc];
  }
  return 0.0;
}

double ae_input(const PlantConfig& cfg, std::span<const double> x) {
  return (1.0 - cfg.grid_fraction) *
         (component_power(cfg, x, Component::Wtg) + component_power(cfg, x, Component::Stpg));
}

double power_balance(const PlantConfig& cfg, std::span<const double> x, double p_load) {
  auto p = [&](Component c) { return component_power(cfg, x, c); };
  const double renewable = cfg.grid_fraction * (p(Component::Wtg) + p(Component::Stpg));
  const double generation = p(Component::Fc1) + p(Component::Fc2) + p(Component::Deg);
  const double storage = p(Component::Fess) + p(Component::Bess) + p(Component::Uc);
  return renewable + generation + cfg.storage_sign * storage - p_load;
}

double grid_frequency_derivative(const PlantConfig& cfg, double df, double dpe) {
  return (dpe - cfg.damping * df) / cfg.inertia;
}

void plant_derivatives(const PlantConfig& cfg, std::span<const double> x, double u,
                       double p_wind, double p_solar, double p_load, std::span<double> dx) {
  using namespace plant_state;
  auto lag = [&](Component c, const FirstOrderLag& block, double state, double input) {
    return cfg.is_connected(c) ? block.derivative(state, input) : 0.0;
  };

  dx[kWtg] = lag(Component::Wtg, cfg.wtg, x[kWtg], p_wind);
  dx[kSolarCollector] =
      lag(Component::Stpg, cfg.solar_collector, x[kSolarCollector], p_solar);
  dx[kStpg] = lag(Component::Stpg, cfg.solar_turbine, x[kStpg], x[kSolarCollector]);
  dx[kAe] = lag(Component::Ae, cfg.ae, x[kAe], ae_input(cfg, x));
  const double p_ae = component_power(cfg, x, Component::Ae);
  dx[kFc1] = lag(Component::Fc1, cfg.fc, x[kFc1], p_ae);
  dx[kFc2] = lag(Component::Fc2, cfg.fc, x[kFc2], p_ae);
  dx[kDeg] = lag(Component::Deg, cfg.deg, x[kDeg], u);
  dx[kFess] = lag(Component::Fess, cfg.fess, x[kFess], u);
  dx[kBess] = lag(Component::Bess, cfg.bess, x[kBess], u);
  dx[kUc] = lag(Component::Uc, cfg.uc, x[kUc], u);
  dx[kFrequency] = grid_frequency_derivative(cfg, x[kFrequency], power_balance(cfg, x, p_load));
}

}  // namespace hybridlfc
