#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hybridlfc/state_space.hpp"

namespace hybridlfc {

/// One Heaviside term coefficient * H(t - time), with H(0) = 1.
struct SwitchTerm {
  double time = 0.0;
  double coefficient = 0.0;
};

using SwitchingSchedule = std::vector<SwitchTerm>;

double switching_signal(std::span<const SwitchTerm> schedule, double t);

/// Stochastic power template
///   P = xi * Gamma(t) + additive(t),  xi = delta * (1 + eta * hp / sqrt(beta))
/// where hp is the uniform sample phi passed through the high-pass 1 - G(s).
struct ProfileSpec {
  double eta = 0.0;
  double beta = 1.0;
  double delta = 1.0;
  LinearStateSpace shaping;  // G(s)
  SwitchingSchedule schedule;
  /// Deterministic steps added after the product with xi.
  SwitchingSchedule additive;

  std::size_t state_size() const { return shaping.order(); }
  void validate(double t_max) const;

  /// Output of 1 - G for filter state x and held sample phi.
  double high_pass(std::span<const double> x, double phi) const;
  double xi(std::span<const double> x, double phi) const;
  double value(std::span<const double> x, double phi, double t) const;
  void filter_derivative(std::span<const double> x, double phi, std::span<double> dx) const;
};

ProfileSpec make_wind();
ProfileSpec make_solar();
ProfileSpec make_load();

enum class ProfileKind : std::uint64_t { Wind = 0, Solar = 1, Load = 2 };

/// Seeded source of phi ~ U(-1, 1). The substream is fully determined by
/// (seed, realization, profile) and does not depend on the host library's
/// distribution implementations.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t realization, std::uint64_t profile);

  double next();

 private:
  std::mt19937_64 engine_;
};

/// Stand-alone stepping of one profile on a uniform grid (for export and
/// tests); the closed-loop simulator integrates the same filter states inside
/// its joint state vector.
class ProfileSampler {
 public:
  ProfileSampler(ProfileSpec spec, NoiseStream stream);

  /// Draws the sample for [t, t + dt), returns P(t) and advances the filter.
  double step(double t, double dt);

  const ProfileSpec& spec() const { return spec_; }

 private:
  ProfileSpec spec_;
  NoiseStream stream_;
  std::vector<double> state_;
  double last_t_ = -1.0;
  bool started_ = false;
};

}  // namespace hybridlfc
