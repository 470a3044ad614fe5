#pragma once

#include <complex>
#include <vector>

#include "hybridlfc/state_space.hpp"

namespace hybridlfc {

/// Fitting band and recursion depth of the Oustaloup filter.
/// The realized filter has 2 * order_n + 1 zero/pole pairs.
struct OustaloupBand {
  double low = 1e-2;
  double high = 1e2;
  int order_n = 2;
};

/// Real zero/pole/gain filter. Zeros and poles are stored as root locations
/// (negative reals), ordered by increasing magnitude.
struct ZpkFilter {
  std::vector<double> zeros;
  std::vector<double> poles;
  double gain = 1.0;

  std::complex<double> evaluate(std::complex<double> s) const;
};

/// Band-limited rational approximation of s^alpha on [w_b, w_h].
ZpkFilter oustaloup_zpk(double alpha, double w_b, double w_h, int n);
ZpkFilter oustaloup_zpk(double alpha, const OustaloupBand& band = {});

/// Cascade of first-order biproper sections (s - z)/(s - p) with the overall
/// gain folded into C and D once. Lower-triangular A, one state per section.
LinearStateSpace zpk_to_state_space(const ZpkFilter& filter);

/// Shorthand for zpk_to_state_space(oustaloup_zpk(alpha, band)).
LinearStateSpace fractional_operator(double alpha, const OustaloupBand& band = {});

}  // namespace hybridlfc
