#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hybridlfc {

/// Single-input single-output continuous-time realization (A, B, C, D).
///
/// The block does not own its state: callers keep the state inside the joint
/// integration vector and hand a view of it to `output` / `derivative`.
struct LinearStateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  std::size_t order() const { return static_cast<std::size_t>(B.size()); }

  double output(std::span<const double> x, double u) const;
  void derivative(std::span<const double> x, double u, std::span<double> dx) const;

  /// C (jwI - A)^-1 B + D
  std::complex<double> freq_response(double omega) const;
  /// -C A^-1 B + D
  double dc_gain() const;
  bool is_hurwitz() const;
};

/// Static gain, no states.
LinearStateSpace static_gain(double gain);

struct LagTerm {
  double gain;
  double time_constant;
};

/// Sum of first-order lags  sum_i k_i / (T_i s + 1), one state per term.
LinearStateSpace parallel_lags(std::span<const LagTerm> terms);

}  // namespace hybridlfc
