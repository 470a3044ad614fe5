#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "hybridlfc/error.hpp"
#include "hybridlfc/integrator.hpp"
#include "hybridlfc/plant.hpp"

using namespace hybridlfc;
namespace ps = hybridlfc::plant_state;

namespace {

using State = std::array<double, ps::kSize>;

// Integrates the plant for constant inputs and returns the final state plus
// the worst per-step slew of every state.
struct PlantRun {
  State x{};
  State max_slew{};
};

PlantRun integrate(const PlantConfig& cfg, double u, double pw, double psol, double pl,
                   double t_end, double h = 0.01) {
  PlantRun run;
  Bs3Stepper stepper(ps::kSize);
  auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    plant_derivatives(cfg, y, u, pw, psol, pl, dy);
  };
  const auto steps = static_cast<int>(std::llround(t_end / h));
  for (int k = 0; k < steps; ++k) {
    const State prev = run.x;
    stepper.step(rhs, k * h, run.x, h);
    for (std::size_t i = 0; i < ps::kSize; ++i) {
      run.max_slew[i] = std::max(run.max_slew[i], std::abs(run.x[i] - prev[i]) / h);
    }
  }
  return run;
}

}  // namespace

TEST_CASE("defaults equal the component table") {
  const PlantConfig c;
  CHECK(c.wtg.gain == 1.0);
  CHECK(c.wtg.time_constant == 1.5);
  CHECK(c.solar_collector.gain == 1.8);
  CHECK(c.solar_collector.time_constant == 1.8);
  CHECK(c.solar_turbine.time_constant == 0.3);
  CHECK(c.ae.gain == 0.002);
  CHECK(c.ae.time_constant == 0.5);
  CHECK(c.fc.gain == 0.01);
  CHECK(c.fc.time_constant == 4.0);
  CHECK(c.deg.gain == 0.003);
  CHECK(c.deg.time_constant == 2.0);
  CHECK(c.fess.gain == -0.01);
  CHECK(c.bess.gain == -0.003);
  CHECK(c.uc.gain == -0.7);
  CHECK(c.uc.time_constant == 0.9);
  CHECK(c.grid_fraction == 0.6);
  CHECK(c.inertia == 0.4);
  CHECK(c.damping == 0.03);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("lag derivative") {
  const FirstOrderLag uc{-0.7, 0.9};
  CHECK(uc.derivative(-0.7, 1.0) == 0.0);
  CHECK(uc.derivative(0.0, 1.0) == doctest::Approx(-0.7 / 0.9));
  FirstOrderLag limited{1.0, 0.1, 0.02};
  CHECK(limited.derivative(0.0, 1.0) == 0.02);
  CHECK(limited.derivative(0.0, -1.0) == -0.02);
  CHECK(limited.derivative(0.999, 1.0) == doctest::Approx(0.01));
}

TEST_CASE("lag step response matches the analytic solution") {
  const FirstOrderLag lag{1.0, 1.5};
  double x = 0.0;
  Bs3Stepper stepper(1);
  const double h = 0.01;
  double worst = 0.0;
  for (int k = 0; k < 600; ++k) {
    std::span<double> y(&x, 1);
    stepper.step([&](double, std::span<const double> s, std::span<double> d) {
      d[0] = lag.derivative(s[0], 1.0);
    }, k * h, y, h);
    worst = std::max(worst, std::abs(x - (1.0 - std::exp(-(k + 1) * h / 1.5))));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("saturated lag ramps at the limit") {
  const FirstOrderLag lag{1.0, 0.1, 0.02};
  double x = 0.0;
  Bs3Stepper stepper(1);
  for (int k = 0; k < 1000; ++k) {
    std::span<double> y(&x, 1);
    stepper.step([&](double, std::span<const double> s, std::span<double> d) {
      d[0] = lag.derivative(s[0], 1.0);
    }, k * 0.01, y, 0.01);
  }
  CHECK(x == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("power balance examples") {
  const PlantConfig c;
  State x{};
  CHECK(power_balance(c, x, 0.0) == 0.0);
  x[ps::kWtg] = 1.0;
  CHECK(power_balance(c, x, 0.0) == doctest::Approx(0.6));
  CHECK(ae_input(c, x) == doctest::Approx(0.4));
  State y{};
  y[ps::kUc] = 0.5;
  y[ps::kFess] = 0.1;
  // Storage powers enter with the configured sign.
  CHECK(power_balance(c, y, 0.2) == doctest::Approx(c.storage_sign * 0.6 - 0.2));
}

TEST_CASE("grid frequency dynamics") {
  const PlantConfig c;
  CHECK(grid_frequency_derivative(c, 0.0, 0.0) == 0.0);
  CHECK(grid_frequency_derivative(c, 1.0, 0.03) == doctest::Approx(0.0));
  // Step in the balance through the full plant: every source zero, constant load.
  PlantConfig off;
  for (std::size_t i = 0; i < kComponentCount; ++i) off.set_connected(static_cast<Component>(i), false);
  const double c0 = -0.003;
  const PlantRun run = integrate(off, 0.0, 0.0, 0.0, -c0, 20.0);
  const double want = (c0 / 0.03) * (1.0 - std::exp(-0.03 * 20.0 / 0.4));
  CHECK(run.x[ps::kFrequency] == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("plant derivative examples") {
  const PlantConfig c;
  State x{};
  State dx{};
  plant_derivatives(c, x, 0.0, 0.0, 0.0, 0.0, dx);
  for (double v : dx) CHECK(v == 0.0);
  plant_derivatives(c, x, 1.0, 0.0, 0.0, 0.0, dx);
  CHECK(dx[ps::kUc] == doctest::Approx(-0.7 / 0.9));
  CHECK(dx[ps::kFess] == doctest::Approx(-0.01 / 0.1));
  CHECK(dx[ps::kBess] == doctest::Approx(-0.003 / 0.1));
  CHECK(dx[ps::kDeg] == doctest::Approx(0.003 / 2.0));
}

TEST_CASE("disconnected component is inert") {
  PlantConfig c;
  c.set_connected(Component::Fess, false);
  State x{};
  x[ps::kFess] = 0.3;
  State dx{};
  for (double u : {-2.0, 0.5, 3.0}) {
    plant_derivatives(c, x, u, 0.2, 0.1, 1.0, dx);
    CHECK(dx[ps::kFess] == 0.0);
    CHECK(component_power(c, x, Component::Fess) == 0.0);
  }
  // Other states keep their places.
  PlantConfig full;
  State dfull{};
  State xz{};
  State dpart{};
  plant_derivatives(full, xz, 1.0, 0.5, 0.1, 1.0, dfull);
  plant_derivatives(c, xz, 1.0, 0.5, 0.1, 1.0, dpart);
  for (std::size_t i = 0; i < ps::kSize; ++i) {
    if (i != ps::kFess) CHECK(dfull[i] == dpart[i]);
  }
}

TEST_CASE("fuel cell chain steady state") {
  const PlantConfig c;
  const PlantRun run = integrate(c, 0.0, 0.5, 0.1111 / 1.8, 0.0, 80.0);
  // STPG input chosen so the cascade output settles at 0.1111.
  CHECK(run.x[ps::kStpg] == doctest::Approx(0.1111).epsilon(1e-6));
  const double fc = 2.0 * 0.01 * 0.002 * 0.4 * 0.6111;
  CHECK(run.x[ps::kFc1] + run.x[ps::kFc2] == doctest::Approx(fc).epsilon(1e-5));
}

TEST_CASE("lag outputs settle at K u") {
  const PlantConfig c;
  const PlantRun run = integrate(c, 0.7, 0.0, 0.0, 0.0, 20.0);
  CHECK(run.x[ps::kDeg] == doctest::Approx(0.003 * 0.7).epsilon(1e-6));
  CHECK(run.x[ps::kFess] == doctest::Approx(-0.01 * 0.7).epsilon(1e-6));
  CHECK(run.x[ps::kBess] == doctest::Approx(-0.003 * 0.7).epsilon(1e-6));
  CHECK(run.x[ps::kUc] == doctest::Approx(-0.7 * 0.7).epsilon(1e-6));
}

TEST_CASE("superposition of the linear plant") {
  const PlantConfig c;
  const PlantRun a = integrate(c, 0.4, 0.3, 0.1, 0.5, 10.0);
  const PlantRun b = integrate(c, -0.9, 0.2, 0.05, 0.7, 10.0);
  const PlantRun ab = integrate(c, -0.5, 0.5, 0.15, 1.2, 10.0);
  for (std::size_t i = 0; i < ps::kSize; ++i) CHECK(std::abs(ab.x[i] - a.x[i] - b.x[i]) < 1e-9);
}

TEST_CASE("rate limits hold on every step") {
  PlantConfig c;
  c.fess.rate_limit = 0.02;
  c.bess.rate_limit = 0.005;
  c.uc.rate_limit = 1.2;
  c.deg.rate_limit = 0.001;
  const PlantRun run = integrate(c, 3.0, 0.5, 0.1, 1.0, 5.0);
  CHECK(run.max_slew[ps::kFess] <= 0.02 + 1e-12);
  CHECK(run.max_slew[ps::kBess] <= 0.005 + 1e-12);
  CHECK(run.max_slew[ps::kUc] <= 1.2 + 1e-12);
  CHECK(run.max_slew[ps::kDeg] <= 0.001 + 1e-12);
  CHECK(run.max_slew[ps::kFess] > 0.019);
}

TEST_CASE("component names and validation") {
  CHECK(parse_component("bess") == Component::Bess);
  CHECK(component_name(Component::Uc) == "uc");
  CHECK_THROWS_AS(parse_component("grid"), Error);
  PlantConfig bad;
  bad.inertia = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  PlantConfig bad2;
  bad2.uc.time_constant = -1.0;
  CHECK_THROWS_AS(bad2.validate(), Error);
}
