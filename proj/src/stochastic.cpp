#include "hybridlfc/stochastic.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "hybridlfc/error.hpp"
#include "hybridlfc/integrator.hpp"

namespace hybridlfc {

namespace {

// Grid times are k*h; a small tolerance keeps H(t - 40) switching on the
// sample that lands on 40 s.
constexpr double kSwitchTolerance = 1e-9;

}  // namespace

double switching_signal(std::span<const SwitchTerm> schedule, double t) {
  double v = 0.0;
  for (const SwitchTerm& term : schedule) {
    if (t >= term.time - kSwitchTolerance) v += term.coefficient;
  }
  return v;
}

void ProfileSpec::validate(double t_max) const {
  if (!(beta > 0.0)) throw Error(ErrorCode::Config, "profile beta must be > 0");
  if (!shaping.is_hurwitz()) throw Error(ErrorCode::Config, "profile shaping filter is unstable");
  for (const auto* sched : {&schedule, &additive}) {
    for (const SwitchTerm& term : *sched) {
      if (term.time < 0.0 || term.time > t_max) {
        throw Error(ErrorCode::Config,
                    fmt::format("switching time {} outside [0, {}]", term.time, t_max));
      }
    }
  }
}

double ProfileSpec::high_pass(std::span<const double> x, double phi) const {
  return phi - shaping.output(x, phi);
}

double ProfileSpec::xi(std::span<const double> x, double phi) const {
  return delta * (1.0 + eta * high_pass(x, phi) / std::sqrt(beta));
}

double ProfileSpec::value(std::span<const double> x, double phi, double t) const {
  return xi(x, phi) * switching_signal(schedule, t) + switching_signal(additive, t);
}

void ProfileSpec::filter_derivative(std::span<const double> x, double phi,
                                    std::span<double> dx) const {
  shaping.derivative(x, phi, dx);
}

ProfileSpec make_wind() {
  const std::array<LagTerm, 1> g{{{1.0, 1e4}}};
  return ProfileSpec{0.8, 10.0, 1.0, parallel_lags(g), {{0.0, 0.5}, {40.0, -0.1}}, {}};
}

ProfileSpec make_solar() {
  const std::array<LagTerm, 1> g{{{1.0, 1e4}}};
  return ProfileSpec{0.7, 2.0, 0.1, parallel_lags(g), {{0.0, 1.1111}, {40.0, -0.5555}}, {}};
}

ProfileSpec make_load() {
  const std::array<LagTerm, 2> g{{{300.0, 300.0}, {-1.0, 1800.0}}};
  return ProfileSpec{0.8, 100.0, 1.0, parallel_lags(g), {{0.0, 1.0}}, {{80.0, 0.8}}};
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t realization, std::uint64_t profile) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(realization), hi(realization), lo(profile),
                    hi(profile)};
  engine_.seed(seq);
}

double NoiseStream::next() {
  // 53 random bits -> [0, 1) -> [-1, 1)
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

ProfileSampler::ProfileSampler(ProfileSpec spec, NoiseStream stream)
    : spec_(std::move(spec)), stream_(stream), state_(spec_.state_size(), 0.0) {}

double ProfileSampler::step(double t, double dt) {
  if (started_ && t < last_t_) {
    throw Error(ErrorCode::OutOfOrderTime,
                fmt::format("profile stepped backwards in time ({} after {})", t, last_t_));
  }
  started_ = true;
  last_t_ = t;
  const double phi = stream_.next();
  const double p = spec_.value(state_, phi, t);
  if (!state_.empty()) {
    auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
      spec_.filter_derivative(y, phi, dy);
    };
    state_ = bs3_step(rhs, t, state_, dt);
  }
  return p;
}

}  // namespace hybridlfc
