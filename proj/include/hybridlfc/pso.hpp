#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace hybridlfc {

/// Henon map (a = 1.4, b = 0.3) started from the origin.
struct HenonState {
  double x = 0.0;
  double y = 0.0;
};

/// Range of the Henon y output used for scaling into [0, 1].
inline constexpr double kHenonLow = -0.3854;
inline constexpr double kHenonHigh = 0.3819;

/// Advances the map and returns the new y scaled to [0, 1] (clamped).
double henon_next(HenonState& state);

struct LogisticState {
  double x = 0.2027;
};

/// x <- 4 x (1 - x). Throws DegenerateState unless 0 < x < 1 on entry.
double logistic_next(LogisticState& state);

enum class RandomSource { Uniform, Logistic, Henon };

std::string_view random_source_tag(RandomSource source);
RandomSource parse_random_source(std::string_view tag);

/// Stream of numbers in [0, 1] feeding the optimizer.
class RandomStream {
 public:
  static RandomStream uniform(std::uint64_t seed);
  static RandomStream logistic(LogisticState init = {});
  static RandomStream henon(HenonState init = {});
  static RandomStream make(RandomSource source, std::uint64_t seed);
  /// Arbitrary generator, e.g. constants in tests.
  static RandomStream custom(std::function<double()> fn);

  double next();

 private:
  using State = std::variant<std::mt19937_64, LogisticState, HenonState, std::function<double()>>;
  explicit RandomStream(State s) : state_(std::move(s)) {}
  State state_;
};

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  void validate() const;
};

struct SwarmConfig {
  int particles = 30;
  int generations = 300;
  double inertia_start = 0.9;
  double inertia_end = 0.1;
  double cognitive = 0.5;  // beta1
  double social = 1.0;     // beta2
  /// Velocity bound as a fraction of each dimension's range.
  double velocity_clamp = 0.2;
  RandomSource source = RandomSource::Uniform;
  /// Threads used for fitness evaluation inside one generation (0 = hardware).
  unsigned workers = 1;

  void validate() const;
};

/// Linear inertia schedule: inertia_start at k = 0, inertia_end at k = generations.
double inertia_at(const SwarmConfig& cfg, int k);

/// Objective value of a position evaluated in generation `generation`. The
/// generation index lets noisy objectives share random numbers per generation.
using Objective = std::function<double(std::span<const double> x, int generation)>;

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_value = 0.0;
  double value = 0.0;
};

struct SwarmState {
  std::vector<Particle> particles;
  std::vector<double> best_position;
  double best_value = 0.0;
  int iteration = 0;
};

struct TraceRow {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
};

struct OptimizeResult {
  std::vector<double> best_position;
  double best_value = 0.0;
  std::vector<TraceRow> trace;
};

/// Random positions inside the bounds, zero velocities, evaluated at generation 0.
SwarmState initialize_swarm(const Objective& objective, const Bounds& bounds,
                            const SwarmConfig& cfg, RandomStream& rng);

/// One velocity/position update of every particle followed by evaluation and
/// best-position bookkeeping. Random numbers are consumed particle-major,
/// dimension-minor (theta1 then theta2).
void pso_step(SwarmState& swarm, const Objective& objective, const Bounds& bounds,
              const SwarmConfig& cfg, RandomStream& rng);

/// Runs `generations` updates; the trace holds the initial swarm plus one
/// row per generation.
OptimizeResult optimize(const Objective& objective, const Bounds& bounds, const SwarmConfig& cfg,
                        std::uint64_t seed);

}  // namespace hybridlfc
