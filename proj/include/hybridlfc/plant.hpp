#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace hybridlfc {

/// K / (T s + 1) with an optional bound on |dx/dt| applied before the
/// integrator.
struct FirstOrderLag {
  double gain = 1.0;
  double time_constant = 1.0;
  std::optional<double> rate_limit;

  double derivative(double x, double u) const;
};

enum class Component : std::size_t { Wtg, Stpg, Ae, Fc1, Fc2, Deg, Fess, Bess, Uc };
inline constexpr std::size_t kComponentCount = 9;

std::string_view component_name(Component c);
Component parse_component(std::string_view name);

/// Plant state layout (11 entries). STPG is a two-lag cascade.
namespace plant_state {
inline constexpr std::size_t kWtg = 0;
inline constexpr std::size_t kSolarCollector = 1;
inline constexpr std::size_t kStpg = 2;
inline constexpr std::size_t kAe = 3;
inline constexpr std::size_t kFc1 = 4;
inline constexpr std::size_t kFc2 = 5;
inline constexpr std::size_t kDeg = 6;
inline constexpr std::size_t kFess = 7;
inline constexpr std::size_t kBess = 8;
inline constexpr std::size_t kUc = 9;
inline constexpr std::size_t kFrequency = 10;
inline constexpr std::size_t kSize = 11;
}  // namespace plant_state

struct PlantConfig {
  FirstOrderLag wtg{1.0, 1.5, std::nullopt};
  FirstOrderLag solar_collector{1.8, 1.8, std::nullopt};
  FirstOrderLag solar_turbine{1.0, 0.3, std::nullopt};
  FirstOrderLag ae{0.002, 0.5, std::nullopt};
  FirstOrderLag fc{0.01, 4.0, std::nullopt};
  FirstOrderLag deg{0.003, 2.0, std::nullopt};
  FirstOrderLag fess{-0.01, 0.1, std::nullopt};
  FirstOrderLag bess{-0.003, 0.1, std::nullopt};
  FirstOrderLag uc{-0.7, 0.9, std::nullopt};

  /// Fraction of WTG + STPG power injected into the grid; the rest feeds the AE.
  double grid_fraction = 0.6;
  double inertia = 0.4;
  double damping = 0.03;
  /// Sign with which FESS, BESS and UC powers enter the grid balance. With
  /// -1 their (negative-gain) absorption powers are subtracted.
  double storage_sign = -1.0;

  std::array<bool, kComponentCount> connected{true, true, true, true, true,
                                              true, true, true, true};

  bool is_connected(Component c) const { return connected[static_cast<std::size_t>(c)]; }
  void set_connected(Component c, bool on) { connected[static_cast<std::size_t>(c)] = on; }

  FirstOrderLag& lag(Component c);
  const FirstOrderLag& lag(Component c) const;

  void validate() const;
};

/// Power of component c given the plant state (0 when disconnected).
double component_power(const PlantConfig& cfg, std::span<const double> x, Component c);

/// Input to the aqua electrolyzer: (1 - Kn)(P_WTG + P_STPG).
double ae_input(const PlantConfig& cfg, std::span<const double> x);

/// Net power imbalance driving the grid frequency.
double power_balance(const PlantConfig& cfg, std::span<const double> x, double p_load);

/// (dP - D df) / M
double grid_frequency_derivative(const PlantConfig& cfg, double df, double dpe);

/// Full plant right-hand side for actuation u and exogenous powers.
void plant_derivatives(const PlantConfig& cfg, std::span<const double> x, double u,
                       double p_wind, double p_solar, double p_load, std::span<double> dx);

}  // namespace hybridlfc
