#pragma once

// Reference computations written independently of the library: direct
// formula evaluation, brute-force sampling and closed-form solutions.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "hybridlfc/controllers.hpp"
#include "hybridlfc/integrator.hpp"

namespace oracle {

// s^alpha Oustaloup product evaluated term by term at s = j w.
inline std::complex<double> oustaloup_response(double alpha, double wb, double wh, int n,
                                               double w) {
  const std::complex<double> s(0.0, w);
  std::complex<double> h = std::pow(wh, alpha);
  for (int k = -n; k <= n; ++k) {
    const double denom = 2.0 * n + 1.0;
    const double wz = wb * std::pow(wh / wb, (k + n + 0.5 * (1.0 - alpha)) / denom);
    const double wp = wb * std::pow(wh / wb, (k + n + 0.5 * (1.0 + alpha)) / denom);
    h *= (s + wz) / (s + wp);
  }
  return h;
}

inline double to_db(double mag) { return 20.0 * std::log10(mag); }
inline double to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Triangle partition with centers k/3, feet on the neighbours, shoulders on
// the outer labels.
inline double membership(int label, double x) {
  x = std::clamp(x, -1.0, 1.0);
  const double c = (label - 3) / 3.0;
  if (label == 0 && x <= c) return 1.0;
  if (label == 6 && x >= c) return 1.0;
  return std::max(0.0, 1.0 - 3.0 * std::abs(x - c));
}

inline int rule_index(int rate, int error) { return std::clamp(rate + error - 3, 0, 6); }

// Product t-norm, bounded-sum rule combination, clipped consequents joined by
// max, centroid by a midpoint Riemann sum.
inline double flc_dense(double e, double de, int samples = 10001) {
  std::array<double, 7> level{};
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 7; ++c) {
      level[static_cast<std::size_t>(rule_index(r, c))] += membership(c, e) * membership(r, de);
    }
  }
  for (double& l : level) l = std::min(l, 1.0);
  double num = 0.0;
  double den = 0.0;
  const double dy = 2.0 / samples;
  for (int i = 0; i < samples; ++i) {
    const double y = -1.0 + (i + 0.5) * dy;
    double mu = 0.0;
    for (int k = 0; k < 7; ++k) mu = std::max(mu, std::min(level[static_cast<std::size_t>(k)], membership(k, y)));
    num += y * mu;
    den += mu;
  }
  return num / den;
}

// Drives a controller block with e(t) on a uniform grid; returns u at t_k = k h.
inline std::vector<double> drive(const hybridlfc::ControllerBlock& block,
                                 const std::function<double(double)>& e, double t_end, double h) {
  const std::size_t n = block.state_size();
  std::vector<double> x(n, 0.0);
  hybridlfc::Bs3Stepper stepper(n);
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  std::vector<double> u;
  u.reserve(steps + 1);
  std::vector<double> scratch(n);
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    block.evaluate(y, e(t), dy);
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    u.push_back(block.output(x, e(t)));
    stepper.step(rhs, t, x, h);
  }
  u.push_back(block.output(x, e(static_cast<double>(steps) * h)));
  return u;
}

inline double rms(const std::vector<double>& a, const std::vector<double>& b, std::size_t from,
                  std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(to - from));
}

inline double rms(const std::vector<double>& a, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += a[i] * a[i];
  return std::sqrt(s / static_cast<double>(to - from));
}

}  // namespace oracle
