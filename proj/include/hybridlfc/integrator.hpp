#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

/// Fixed-step Bogacki-Shampine (third-order) stepper with reusable stage
/// buffers. `step` advances y in place and throws NonFiniteState if any
/// component of the new state is NaN or infinite.
class Bs3Stepper {
 public:
  explicit Bs3Stepper(std::size_t n) : k1_(n), k2_(n), k3_(n), tmp_(n) {}

  template <class F>
  void step(F&& f, double t, std::span<double> y, double h) {
    const std::size_t n = y.size();
    f(t, std::span<const double>(y), std::span<double>(k1_.data(), n));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
    f(t + 0.5 * h, std::span<const double>(tmp_.data(), n), std::span<double>(k2_.data(), n));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.75 * h * k2_[i];
    f(t + 0.75 * h, std::span<const double>(tmp_.data(), n), std::span<double>(k3_.data(), n));
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += h * (2.0 * k1_[i] + 3.0 * k2_[i] + 4.0 * k3_[i]) / 9.0;
      finite = finite && std::isfinite(y[i]);
    }
    if (!finite) throw Error(ErrorCode::NonFiniteState, "integration produced a non-finite state");
  }

  /// First-stage derivative of the most recent step, i.e. f(t, y_prev).
  std::span<const double> last_slope() const { return k1_; }

 private:
  std::vector<double> k1_, k2_, k3_, tmp_;
};

/// One Bogacki-Shampine step: y + h (2 k1 + 3 k2 + 4 k3) / 9.
std::vector<double> bs3_step(const Rhs& f, double t, std::span<const double> y, double h);

}  // namespace hybridlfc
