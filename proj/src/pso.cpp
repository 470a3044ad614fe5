#include "hybridlfc/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kInf : v; }

void evaluate_all(std::vector<Particle>& particles, const Objective& objective, int generation,
                  unsigned workers) {
  const std::size_t n = particles.size();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  auto eval_range = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      double v;
      try {
        v = sanitize(objective(particles[i].position, generation));
      } catch (const Error&) {
        v = kInf;
      }
      particles[i].value = v;
    }
  };
  if (workers <= 1) {
    eval_range(0, 1);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(eval_range, w, workers);
}

void update_bests(SwarmState& swarm) {
  for (Particle& p : swarm.particles) {
    if (p.value < p.best_value) {
      p.best_value = p.value;
      p.best_position = p.position;
    }
    if (p.best_value < swarm.best_value) {
      swarm.best_value = p.best_value;
      swarm.best_position = p.best_position;
    }
  }
}

TraceRow trace_row(const SwarmState& swarm) {
  double sum = 0.0;
  int finite = 0;
  for (const Particle& p : swarm.particles) {
    if (std::isfinite(p.value)) {
      sum += p.value;
      ++finite;
    }
  }
  return {swarm.iteration, swarm.best_value, finite > 0 ? sum / finite : kInf};
}

}  // namespace

double henon_next(HenonState& s) {
  constexpr double a = 1.4;
  constexpr double b = 0.3;
  const double x_next = s.y + 1.0 - a * s.x * s.x;
  const double y_next = b * s.x;
  s.x = x_next;
  s.y = y_next;
  return std::clamp((y_next - kHenonLow) / (kHenonHigh - kHenonLow), 0.0, 1.0);
}

double logistic_next(LogisticState& s) {
  if (!(s.x > 0.0 && s.x < 1.0)) {
    throw Error(ErrorCode::DegenerateState,
                fmt::format("logistic map state {} left (0, 1)", s.x));
  }
  s.x = 4.0 * s.x * (1.0 - s.x);
  return s.x;
}

std::string_view random_source_tag(RandomSource source) {
  switch (source) {
    case RandomSource::Uniform: return "uniform";
    case RandomSource::Logistic: return "logistic";
    case RandomSource::Henon: return "henon";
  }
  return "unknown";
}

RandomSource parse_random_source(std::string_view tag) {
  if (tag == "uniform") return RandomSource::Uniform;
  if (tag == "logistic") return RandomSource::Logistic;
  if (tag == "henon") return RandomSource::Henon;
  throw Error(ErrorCode::Config, fmt::format("unknown rng tag '{}'", tag));
}

RandomStream RandomStream::uniform(std::uint64_t seed) {
  return RandomStream(std::mt19937_64(seed));
}

RandomStream RandomStream::logistic(LogisticState init) { return RandomStream(init); }

RandomStream RandomStream::henon(HenonState init) { return RandomStream(init); }

RandomStream RandomStream::custom(std::function<double()> fn) {
  return RandomStream(std::move(fn));
}

RandomStream RandomStream::make(RandomSource source, std::uint64_t seed) {
  switch (source) {
    case RandomSource::Uniform: return uniform(seed);
    case RandomSource::Logistic: return logistic();
    case RandomSource::Henon: return henon();
  }
  throw Error(ErrorCode::InvalidArgument, "unknown random source");
}

double RandomStream::next() {
  struct Visitor {
    double operator()(std::mt19937_64& e) const {
      return static_cast<double>(e() >> 11) * 0x1.0p-53;
    }
    double operator()(LogisticState& s) const { return logistic_next(s); }
    double operator()(HenonState& s) const { return henon_next(s); }
    double operator()(std::function<double()>& fn) const { return fn(); }
  };
  return std::visit(Visitor{}, state_);
}

void Bounds::validate() const {
  if (lower.size() != upper.size() || lower.empty()) {
    throw Error(ErrorCode::InvalidArgument, "bounds must have matching non-zero dimensions");
  }
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (!(lower[d] <= upper[d])) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("bounds[{}] = [{}, {}] not ordered", d, lower[d], upper[d]));
    }
  }
}

void SwarmConfig::validate() const {
  if (particles < 1 || generations < 1) {
    throw Error(ErrorCode::Config, "particles and generations must be >= 1");
  }
  if (cognitive < 0.0 || social < 0.0 || velocity_clamp <= 0.0) {
    throw Error(ErrorCode::Config, "learning rates must be >= 0 and velocity clamp > 0");
  }
}

double inertia_at(const SwarmConfig& cfg, int k) {
  const double frac = static_cast<double>(k) / static_cast<double>(cfg.generations);
  return cfg.inertia_start + (cfg.inertia_end - cfg.inertia_start) * frac;
}

SwarmState initialize_swarm(const Objective& objective, const Bounds& bounds,
                            const SwarmConfig& cfg, RandomStream& rng) {
  bounds.validate();
  cfg.validate();
  const std::size_t dim = bounds.dimension();
  SwarmState swarm;
  swarm.particles.resize(static_cast<std::size_t>(cfg.particles));
  for (Particle& p : swarm.particles) {
    p.position.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      p.position[d] = bounds.lower[d] + rng.next() * (bounds.upper[d] - bounds.lower[d]);
    }
    p.velocity.assign(dim, 0.0);
  }
  evaluate_all(swarm.particles, objective, 0, cfg.workers);
  swarm.best_value = kInf;
  swarm.best_position = swarm.particles.front().position;
  for (Particle& p : swarm.particles) {
    p.best_position = p.position;
    p.best_value = p.value;
  }
  update_bests(swarm);
  swarm.iteration = 0;
  return swarm;
}

void pso_step(SwarmState& swarm, const Objective& objective, const Bounds& bounds,
              const SwarmConfig& cfg, RandomStream& rng) {
  const std::size_t dim = bounds.dimension();
  const double inertia = inertia_at(cfg, swarm.iteration);
  for (Particle& p : swarm.particles) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double theta1 = rng.next();
      const double theta2 = rng.next();
      const double range = bounds.upper[d] - bounds.lower[d];
      const double vmax = cfg.velocity_clamp * range;
      double v = inertia * p.velocity[d] +
                 cfg.cognitive * theta1 * (p.best_position[d] - p.position[d]) +
                 cfg.social * theta2 * (swarm.best_position[d] - p.position[d]);
      v = std::clamp(v, -vmax, vmax);
      p.velocity[d] = v;
      p.position[d] = std::clamp(p.position[d] + v, bounds.lower[d], bounds.upper[d]);
    }
  }
  ++swarm.iteration;
  evaluate_all(swarm.particles, objective, swarm.iteration, cfg.workers);
  update_bests(swarm);
}

OptimizeResult optimize(const Objective& objective, const Bounds& bounds, const SwarmConfig& cfg,
                        std::uint64_t seed) {
  RandomStream rng = RandomStream::make(cfg.source, seed);
  SwarmState swarm = initialize_swarm(objective, bounds, cfg, rng);
  OptimizeResult result;
  result.trace.reserve(static_cast<std::size_t>(cfg.generations) + 1);
  result.trace.push_back(trace_row(swarm));
  for (int k = 0; k < cfg.generations; ++k) {
    pso_step(swarm, objective, bounds, cfg, rng);
    result.trace.push_back(trace_row(swarm));
  }
  result.best_position = swarm.best_position;
  result.best_value = swarm.best_value;
  return result;
}

}  // namespace hybridlfc
